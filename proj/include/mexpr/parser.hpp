#pragma once

#include <string_view>

#include "mexpr/errors.hpp"
#include "mexpr/mst.hpp"

namespace mexpr {

/// Parses infix expression source into an Mst. Throws ParseError (with a
/// byte offset and the expected-token list) on malformed input.
///
/// Grammar, loosest to tightest: `+`/`-` (left) < `*`/`/` (left) < unary
/// minus < `^` (right, maps to pow) < atoms and `ident(expr)` calls.
/// `^` binds tighter than unary minus, so -x^2 parses as -(x^2). No implicit
/// multiplication. See docs/grammar.md for the normative grammar.
Mst parse(std::string_view input);

} // namespace mexpr
