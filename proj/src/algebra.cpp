#include "mexpr/algebra.hpp"

#include <cmath>

namespace mexpr {

// --- RealField -------------------------------------------------------------

std::optional<double> RealField::constant(const Symbol& sym) const {
    if (sym.name() == "pi")
        return 3.141592653589793;
    if (sym.name() == "e")
        return 2.718281828459045;
    return std::nullopt;
}

double RealField::number(const NumericLiteral& lit) const { return lit.as_double(); }

double RealField::sin(const double& a) const { return std::sin(a); }
double RealField::cos(const double& a) const { return std::cos(a); }
double RealField::tan(const double& a) const { return std::tan(a); }
double RealField::asin(const double& a) const { return std::asin(a); }
double RealField::acos(const double& a) const { return std::acos(a); }
double RealField::atan(const double& a) const { return std::atan(a); }
double RealField::exp(const double& a) const { return std::exp(a); }
double RealField::ln(const double& a) const { return std::log(a); }
double RealField::sqrt(const double& a) const { return std::sqrt(a); }
double RealField::pow(const double& a, const double& b) const { return std::pow(a, b); }

std::optional<RealField::UnaryFn> RealField::unary_op(std::string_view op) const {
    const RealField* self = this;
    if (op == "neg") return UnaryFn([self](const double& a) { return self->negate(a); });
    if (op == "sin") return UnaryFn([self](const double& a) { return self->sin(a); });
    if (op == "cos") return UnaryFn([self](const double& a) { return self->cos(a); });
    if (op == "tan") return UnaryFn([self](const double& a) { return self->tan(a); });
    if (op == "asin") return UnaryFn([self](const double& a) { return self->asin(a); });
    if (op == "acos") return UnaryFn([self](const double& a) { return self->acos(a); });
    if (op == "atan") return UnaryFn([self](const double& a) { return self->atan(a); });
    if (op == "exp") return UnaryFn([self](const double& a) { return self->exp(a); });
    if (op == "ln") return UnaryFn([self](const double& a) { return self->ln(a); });
    if (op == "sqrt") return UnaryFn([self](const double& a) { return self->sqrt(a); });
    return std::nullopt;
}

std::optional<RealField::BinaryFn> RealField::binary_op(std::string_view op) const {
    const RealField* self = this;
    if (op == "+")
        return BinaryFn([self](const double& a, const double& b) { return self->add(a, b); });
    if (op == "-")
        return BinaryFn(
            [self](const double& a, const double& b) { return self->subtract(a, b); });
    if (op == "*")
        return BinaryFn(
            [self](const double& a, const double& b) { return self->multiply(a, b); });
    if (op == "/")
        return BinaryFn(
            [self](const double& a, const double& b) { return self->divide(a, b); });
    if (op == "pow")
        return BinaryFn(
            [self](const double& a, const double& b) { return self->pow(a, b); });
    return std::nullopt;
}

// --- ComplexField ----------------------------------------------------------

std::optional<ComplexValue> ComplexField::constant(const Symbol& sym) const {
    if (sym.name() == "i")
        return ComplexValue{0.0, 1.0};
    return std::nullopt;
}

ComplexValue ComplexField::number(const NumericLiteral& lit) const {
    return {lit.as_double(), 0.0};
}

ComplexValue ComplexField::add(const ComplexValue& a, const ComplexValue& b) const {
    return {a.re + b.re, a.im + b.im};
}

ComplexValue ComplexField::negate(const ComplexValue& a) const { return {-a.re, -a.im}; }

ComplexValue ComplexField::scale(const ComplexValue& a, const NumericLiteral& k) const {
    double s = k.as_double();
    return {a.re * s, a.im * s};
}

ComplexValue ComplexField::multiply(const ComplexValue& a, const ComplexValue& b) const {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexValue ComplexField::divide(const ComplexValue& a, const ComplexValue& b) const {
    // conjugate formula: (a * conj(b)) / |b|^2
    double denom = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom};
}

// --- IntegerRing -----------------------------------------------------------

std::optional<std::int64_t> IntegerRing::constant(const Symbol&) const {
    return std::nullopt;
}

std::int64_t IntegerRing::number(const NumericLiteral& lit) const {
    if (!lit.is_integer())
        throw EvalError(EvalErrorKind::UnsupportedOperation, "decimal-literal", name());
    return lit.int_value();
}

std::int64_t IntegerRing::add(const std::int64_t& a, const std::int64_t& b) const {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw EvalError(EvalErrorKind::ArithmeticOverflow, "+", name());
    return r;
}

std::int64_t IntegerRing::negate(const std::int64_t& a) const {
    std::int64_t r;
    if (__builtin_sub_overflow(std::int64_t{0}, a, &r))
        throw EvalError(EvalErrorKind::ArithmeticOverflow, "neg", name());
    return r;
}

std::int64_t IntegerRing::scale(const std::int64_t& a, const NumericLiteral& k) const {
    return multiply(a, number(k));
}

std::int64_t IntegerRing::subtract(const std::int64_t& a, const std::int64_t& b) const {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw EvalError(EvalErrorKind::ArithmeticOverflow, "-", name());
    return r;
}

std::int64_t IntegerRing::multiply(const std::int64_t& a, const std::int64_t& b) const {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw EvalError(EvalErrorKind::ArithmeticOverflow, "*", name());
    return r;
}

// --- singletons ------------------------------------------------------------

const RealField& real_field() {
    static const RealField instance;
    return instance;
}

const ComplexField& complex_field() {
    static const ComplexField instance;
    return instance;
}

const IntegerRing& integer_ring() {
    static const IntegerRing instance;
    return instance;
}

} // namespace mexpr
