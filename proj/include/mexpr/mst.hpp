#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "mexpr/algebra.hpp"
#include "mexpr/symbol.hpp"

namespace mexpr {

/// Canonical operation name registry shared by every module.
bool is_unary_op(std::string_view op);
bool is_binary_op(std::string_view op);
std::span<const std::string_view> unary_op_names();
std::span<const std::string_view> binary_op_names();

/// Immutable expression tree: terminal (symbol or number), unary application
/// or binary application. Operation names are validated against the canonical
/// registry at construction, so a malformed tree cannot exist.
///
/// Mst is a value type over a shared immutable node; copies are cheap.
class Mst {
public:
    enum class Kind { Symbol, Number, Unary, Binary };

    static Mst symbol(Symbol s);
    static Mst symbol(std::string_view name) { return symbol(Symbol(std::string(name))); }
    static Mst number(NumericLiteral lit);
    static Mst integer(std::int64_t v) { return number(NumericLiteral::integer(v)); }
    static Mst unary(std::string_view op, Mst operand);
    static Mst binary(std::string_view op, Mst left, Mst right);

    Kind kind() const;
    const Symbol& symbol_value() const;       // Kind::Symbol only
    const NumericLiteral& number_value() const; // Kind::Number only
    const std::string& op() const;            // Unary/Binary only
    const Mst& operand() const;               // Unary only
    const Mst& left() const;                  // Binary only
    const Mst& right() const;                 // Binary only

    std::size_t node_count() const;
    std::size_t depth() const;
    bool contains_symbol() const;

    friend bool operator==(const Mst& a, const Mst& b);
    friend bool operator!=(const Mst& a, const Mst& b) { return !(a == b); }

private:
    struct Node;
    explicit Mst(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// ExtendedField-tier context whose every operation builds the corresponding
/// MST node instead of computing. `constant` wraps any symbol (resolution is
/// deferred to interpretation against a real target context).
class MstBuilder final : public ExtendedFieldContext<Mst> {
public:
    const char* name() const override { return "mst-builder"; }

    std::optional<Mst> constant(const Symbol& sym) const override {
        return Mst::symbol(sym);
    }
    Mst number(const NumericLiteral& lit) const override { return Mst::number(lit); }

    Mst add(const Mst& a, const Mst& b) const override { return Mst::binary("+", a, b); }
    Mst negate(const Mst& a) const override { return Mst::unary("neg", a); }
    Mst zero() const override { return Mst::integer(0); }
    Mst scale(const Mst& a, const NumericLiteral& k) const override {
        return Mst::binary("*", Mst::number(k), a);
    }
    Mst subtract(const Mst& a, const Mst& b) const override {
        return Mst::binary("-", a, b);
    }
    Mst multiply(const Mst& a, const Mst& b) const override {
        return Mst::binary("*", a, b);
    }
    Mst one() const override { return Mst::integer(1); }
    Mst divide(const Mst& a, const Mst& b) const override {
        return Mst::binary("/", a, b);
    }

    Mst sin(const Mst& a) const override { return Mst::unary("sin", a); }
    Mst cos(const Mst& a) const override { return Mst::unary("cos", a); }
    Mst tan(const Mst& a) const override { return Mst::unary("tan", a); }
    Mst asin(const Mst& a) const override { return Mst::unary("asin", a); }
    Mst acos(const Mst& a) const override { return Mst::unary("acos", a); }
    Mst atan(const Mst& a) const override { return Mst::unary("atan", a); }
    Mst exp(const Mst& a) const override { return Mst::unary("exp", a); }
    Mst ln(const Mst& a) const override { return Mst::unary("ln", a); }
    Mst sqrt(const Mst& a) const override { return Mst::unary("sqrt", a); }
    Mst pow(const Mst& a, const Mst& b) const override {
        return Mst::binary("pow", a, b);
    }
};

const MstBuilder& mst_builder_context();

/// Deterministic s-expression rendering, e.g. `(+ x 2)`.
std::string to_sexpr(const Mst& tree);

/// JSON interchange form. Schema: {"sym": name}, {"num": {"int": n} |
/// {"dec": text}}, {"op": name, "args": [...]} with arity implied by args.
std::string to_json(const Mst& tree);
Mst from_json(std::string_view text); // throws ParseError

/// Infix rendering that re-parses into a structurally equal tree; parentheses
/// only where precedence requires.
std::string pretty_print(const Mst& tree);

} // namespace mexpr
