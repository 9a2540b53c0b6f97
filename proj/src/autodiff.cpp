#include "mexpr/autodiff.hpp"

#include <cstdint>
#include <optional>

#include "mexpr/errors.hpp"

namespace mexpr {

namespace {

bool contains(const Mst& tree, const Symbol& sym) {
    switch (tree.kind()) {
    case Mst::Kind::Symbol:
        return tree.symbol_value() == sym;
    case Mst::Kind::Number:
        return false;
    case Mst::Kind::Unary:
        return contains(tree.operand(), sym);
    case Mst::Kind::Binary:
        return contains(tree.left(), sym) || contains(tree.right(), sym);
    }
    return false;
}

Mst zero() { return Mst::integer(0); }
Mst one() { return Mst::integer(1); }
Mst two() { return Mst::integer(2); }

Mst mul(Mst a, Mst b) { return Mst::binary("*", std::move(a), std::move(b)); }
Mst add(Mst a, Mst b) { return Mst::binary("+", std::move(a), std::move(b)); }
Mst sub(Mst a, Mst b) { return Mst::binary("-", std::move(a), std::move(b)); }
Mst div(Mst a, Mst b) { return Mst::binary("/", std::move(a), std::move(b)); }
Mst pw(Mst a, Mst b) { return Mst::binary("pow", std::move(a), std::move(b)); }
Mst neg(Mst a) { return Mst::unary("neg", std::move(a)); }

Mst diff_unary(const Mst& tree, const Symbol& wrt) {
    const Mst& u = tree.operand();
    Mst du = differentiate(u, wrt);
    const std::string& op = tree.op();
    if (op == "neg")
        return neg(std::move(du));
    if (op == "sin")
        return mul(Mst::unary("cos", u), std::move(du));
    if (op == "cos")
        return neg(mul(Mst::unary("sin", u), std::move(du)));
    if (op == "tan")
        return div(std::move(du), pw(Mst::unary("cos", u), two()));
    if (op == "asin")
        return div(std::move(du), Mst::unary("sqrt", sub(one(), pw(u, two()))));
    if (op == "acos")
        return neg(div(std::move(du), Mst::unary("sqrt", sub(one(), pw(u, two())))));
    if (op == "atan")
        return div(std::move(du), add(one(), pw(u, two())));
    if (op == "exp")
        return mul(Mst::unary("exp", u), std::move(du));
    if (op == "ln")
        return div(std::move(du), u);
    if (op == "sqrt")
        return div(std::move(du), mul(two(), Mst::unary("sqrt", u)));
    throw DiffError(op);
}

Mst diff_binary(const Mst& tree, const Symbol& wrt) {
    const Mst& a = tree.left();
    const Mst& b = tree.right();
    const std::string& op = tree.op();
    if (op == "+")
        return add(differentiate(a, wrt), differentiate(b, wrt));
    if (op == "-")
        return sub(differentiate(a, wrt), differentiate(b, wrt));
    if (op == "*")
        return add(mul(differentiate(a, wrt), b), mul(a, differentiate(b, wrt)));
    if (op == "/")
        return div(sub(mul(differentiate(a, wrt), b), mul(a, differentiate(b, wrt))),
                   pw(b, two()));
    if (op == "pow") {
        if (!contains(b, wrt)) {
            // power rule: c * u^(c-1) * u'
            return mul(mul(b, pw(a, sub(b, one()))), differentiate(a, wrt));
        }
        // general exponent: rewrite u^v as exp(v * ln(u)) and differentiate
        return differentiate(Mst::unary("exp", mul(b, Mst::unary("ln", a))), wrt);
    }
    throw DiffError(op);
}

} // namespace

Mst differentiate(const Mst& tree, const Symbol& wrt) {
    switch (tree.kind()) {
    case Mst::Kind::Number:
        return zero();
    case Mst::Kind::Symbol:
        return tree.symbol_value() == wrt ? one() : zero();
    case Mst::Kind::Unary:
        return diff_unary(tree, wrt);
    case Mst::Kind::Binary:
        return diff_binary(tree, wrt);
    }
    throw DiffError("?");
}

// --- simplification --------------------------------------------------------

namespace {

bool is_int(const Mst& t, std::int64_t v) {
    return t.kind() == Mst::Kind::Number && t.number_value().is_integer() &&
           t.number_value().int_value() == v;
}

// zero/one tests also match decimal literals with those exact values
bool is_value(const Mst& t, double v) {
    return t.kind() == Mst::Kind::Number && t.number_value().as_double() == v;
}

std::optional<std::int64_t> int_literal(const Mst& t) {
    if (t.kind() == Mst::Kind::Number && t.number_value().is_integer())
        return t.number_value().int_value();
    return std::nullopt;
}

std::optional<std::int64_t> fold_int(const std::string& op, std::int64_t a,
                                     std::int64_t b) {
    std::int64_t r;
    if (op == "+")
        return __builtin_add_overflow(a, b, &r) ? std::nullopt : std::optional(r);
    if (op == "-")
        return __builtin_sub_overflow(a, b, &r) ? std::nullopt : std::optional(r);
    if (op == "*")
        return __builtin_mul_overflow(a, b, &r) ? std::nullopt : std::optional(r);
    if (op == "/") {
        if (b == 0 || a % b != 0)
            return std::nullopt; // only exact division folds
        if (a == INT64_MIN && b == -1)
            return std::nullopt;
        return a / b;
    }
    if (op == "pow") {
        if (b < 0 || b > 63)
            return std::nullopt;
        std::int64_t acc = 1;
        for (std::int64_t i = 0; i < b; ++i)
            if (__builtin_mul_overflow(acc, a, &acc))
                return std::nullopt;
        return acc;
    }
    return std::nullopt;
}

Mst simplify_once(const Mst& t) {
    switch (t.kind()) {
    case Mst::Kind::Symbol:
    case Mst::Kind::Number:
        return t;
    case Mst::Kind::Unary: {
        Mst u = simplify_once(t.operand());
        if (t.op() == "neg") {
            if (u.kind() == Mst::Kind::Unary && u.op() == "neg")
                return u.operand();
            if (auto v = int_literal(u); v && *v != INT64_MIN)
                return Mst::integer(-*v);
        }
        return Mst::unary(t.op(), std::move(u));
    }
    case Mst::Kind::Binary: {
        Mst l = simplify_once(t.left());
        Mst r = simplify_once(t.right());
        const std::string& op = t.op();
        if (op == "+") {
            if (is_value(l, 0.0))
                return r;
            if (is_value(r, 0.0))
                return l;
        } else if (op == "-") {
            if (is_value(r, 0.0))
                return l;
        } else if (op == "*") {
            if (is_value(l, 1.0))
                return r;
            if (is_value(r, 1.0))
                return l;
            if (is_int(l, 0) || is_int(r, 0))
                return Mst::integer(0);
        } else if (op == "/") {
            if (is_value(r, 1.0))
                return l;
        } else if (op == "pow") {
            if (is_value(r, 1.0))
                return l;
            if (is_value(r, 0.0))
                return Mst::integer(1);
        }
        if (auto a = int_literal(l))
            if (auto b = int_literal(r))
                if (auto folded = fold_int(op, *a, *b))
                    return Mst::integer(*folded);
        return Mst::binary(op, std::move(l), std::move(r));
    }
    }
    return t;
}

} // namespace

Mst simplify(const Mst& tree) {
    Mst current = tree;
    for (;;) {
        Mst next = simplify_once(current);
        if (next == current)
            return current;
        current = std::move(next);
    }
}

} // namespace mexpr
