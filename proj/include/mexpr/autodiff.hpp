#pragma once

#include "mexpr/mst.hpp"

namespace mexpr {

/// Symbolic derivative of `tree` with respect to `wrt`. Other symbols are
/// treated as constants. The result is not simplified; pipe it through
/// `simplify` for readable output.
Mst differentiate(const Mst& tree, const Symbol& wrt);

/// Applies the local rewrite rules (identity elements, double negation,
/// trivial powers, exact integer folding) to a fixpoint. Decimal arithmetic
/// is never folded, so floating-point results change by at most 1 ulp.
Mst simplify(const Mst& tree);

} // namespace mexpr
