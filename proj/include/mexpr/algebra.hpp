#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "mexpr/errors.hpp"
#include "mexpr/symbol.hpp"

namespace mexpr {

/// Capability tiers; each tier includes all operations of the previous one.
enum class Tier { Algebra, Space, Ring, Field, ExtendedField };

/// Polymorphic operation provider over an element type. Operations live in
/// the context, not in the values; any tier can be asked for an operation by
/// name and reports unsupported ones by absence.
///
/// Contexts are immutable and freely shareable across threads; dispatched
/// function values are likewise immutable and may be stored indefinitely.
template <class T>
class AlgebraContext {
public:
    using UnaryFn = std::function<T(const T&)>;
    using BinaryFn = std::function<T(const T&, const T&)>;

    virtual ~AlgebraContext() = default;

    virtual Tier tier() const { return Tier::Algebra; }
    virtual const char* name() const = 0;

    /// Algebra-defined constants (pi, e, i, ...). Absent for unknown symbols.
    virtual std::optional<T> constant(const Symbol& sym) const = 0;

    /// Embedding of a numeric literal into the element type.
    virtual T number(const NumericLiteral& lit) const = 0;

    virtual std::optional<UnaryFn> unary_op(std::string_view op) const {
        (void)op;
        return std::nullopt;
    }
    virtual std::optional<BinaryFn> binary_op(std::string_view op) const {
        (void)op;
        return std::nullopt;
    }
};

/// Space tier: addition, additive identity, negation and scaling by a number.
template <class T>
class SpaceContext : public AlgebraContext<T> {
public:
    using typename AlgebraContext<T>::UnaryFn;
    using typename AlgebraContext<T>::BinaryFn;

    Tier tier() const override { return Tier::Space; }

    virtual T add(const T& a, const T& b) const = 0;
    virtual T negate(const T& a) const = 0;
    virtual T zero() const = 0;
    virtual T scale(const T& a, const NumericLiteral& k) const = 0;

    virtual T subtract(const T& a, const T& b) const { return add(a, negate(b)); }

    std::optional<UnaryFn> unary_op(std::string_view op) const override {
        if (op == "neg")
            return UnaryFn([this](const T& a) { return negate(a); });
        return AlgebraContext<T>::unary_op(op);
    }

    std::optional<BinaryFn> binary_op(std::string_view op) const override {
        if (op == "+")
            return BinaryFn([this](const T& a, const T& b) { return add(a, b); });
        if (op == "-")
            return BinaryFn([this](const T& a, const T& b) { return subtract(a, b); });
        return AlgebraContext<T>::binary_op(op);
    }
};

/// Ring tier: multiplication and the multiplicative identity.
template <class T>
class RingContext : public SpaceContext<T> {
public:
    using typename AlgebraContext<T>::BinaryFn;

    Tier tier() const override { return Tier::Ring; }

    virtual T multiply(const T& a, const T& b) const = 0;
    virtual T one() const = 0;

    std::optional<BinaryFn> binary_op(std::string_view op) const override {
        if (op == "*")
            return BinaryFn([this](const T& a, const T& b) { return multiply(a, b); });
        return SpaceContext<T>::binary_op(op);
    }
};

/// Field tier: division.
template <class T>
class FieldContext : public RingContext<T> {
public:
    using typename AlgebraContext<T>::BinaryFn;

    Tier tier() const override { return Tier::Field; }

    virtual T divide(const T& a, const T& b) const = 0;

    std::optional<BinaryFn> binary_op(std::string_view op) const override {
        if (op == "/")
            return BinaryFn([this](const T& a, const T& b) { return divide(a, b); });
        return RingContext<T>::binary_op(op);
    }
};

/// ExtendedField tier: the transcendental functions and pow.
template <class T>
class ExtendedFieldContext : public FieldContext<T> {
public:
    using typename AlgebraContext<T>::UnaryFn;
    using typename AlgebraContext<T>::BinaryFn;

    Tier tier() const override { return Tier::ExtendedField; }

    virtual T sin(const T&) const = 0;
    virtual T cos(const T&) const = 0;
    virtual T tan(const T&) const = 0;
    virtual T asin(const T&) const = 0;
    virtual T acos(const T&) const = 0;
    virtual T atan(const T&) const = 0;
    virtual T exp(const T&) const = 0;
    virtual T ln(const T&) const = 0;
    virtual T sqrt(const T&) const = 0;
    virtual T pow(const T&, const T&) const = 0;

    std::optional<UnaryFn> unary_op(std::string_view op) const override {
        if (op == "sin") return UnaryFn([this](const T& a) { return sin(a); });
        if (op == "cos") return UnaryFn([this](const T& a) { return cos(a); });
        if (op == "tan") return UnaryFn([this](const T& a) { return tan(a); });
        if (op == "asin") return UnaryFn([this](const T& a) { return asin(a); });
        if (op == "acos") return UnaryFn([this](const T& a) { return acos(a); });
        if (op == "atan") return UnaryFn([this](const T& a) { return atan(a); });
        if (op == "exp") return UnaryFn([this](const T& a) { return exp(a); });
        if (op == "ln") return UnaryFn([this](const T& a) { return ln(a); });
        if (op == "sqrt") return UnaryFn([this](const T& a) { return sqrt(a); });
        return FieldContext<T>::unary_op(op);
    }

    std::optional<BinaryFn> binary_op(std::string_view op) const override {
        if (op == "pow")
            return BinaryFn([this](const T& a, const T& b) { return pow(a, b); });
        return FieldContext<T>::binary_op(op);
    }
};

/// Dispatch helpers: like unary_op/binary_op but absence becomes a
/// caller-visible EvalError naming the operation and the context.
template <class T>
typename AlgebraContext<T>::UnaryFn dispatch_unary(const AlgebraContext<T>& ctx,
                                                   std::string_view op) {
    if (auto f = ctx.unary_op(op))
        return *f;
    throw EvalError(EvalErrorKind::UnsupportedOperation, std::string(op), ctx.name());
}

template <class T>
typename AlgebraContext<T>::BinaryFn dispatch_binary(const AlgebraContext<T>& ctx,
                                                     std::string_view op) {
    if (auto f = ctx.binary_op(op))
        return *f;
    throw EvalError(EvalErrorKind::UnsupportedOperation, std::string(op), ctx.name());
}

// ---------------------------------------------------------------------------
// Concrete contexts

/// Complex number with field arithmetic; division uses the conjugate formula.
struct ComplexValue {
    double re = 0.0;
    double im = 0.0;

    friend bool operator==(const ComplexValue& a, const ComplexValue& b) {
        return a.re == b.re && a.im == b.im;
    }
};

/// IEEE-754 double field with pi/e constants and the full transcendental set.
class RealField final : public ExtendedFieldContext<double> {
public:
    const char* name() const override { return "real"; }

    std::optional<double> constant(const Symbol& sym) const override;
    double number(const NumericLiteral& lit) const override;

    double add(const double& a, const double& b) const override { return a + b; }
    double negate(const double& a) const override { return -a; }
    double zero() const override { return 0.0; }
    double scale(const double& a, const NumericLiteral& k) const override {
        return a * k.as_double();
    }
    double subtract(const double& a, const double& b) const override { return a - b; }
    double multiply(const double& a, const double& b) const override { return a * b; }
    double one() const override { return 1.0; }
    double divide(const double& a, const double& b) const override { return a / b; }

    double sin(const double& a) const override;
    double cos(const double& a) const override;
    double tan(const double& a) const override;
    double asin(const double& a) const override;
    double acos(const double& a) const override;
    double atan(const double& a) const override;
    double exp(const double& a) const override;
    double ln(const double& a) const override;
    double sqrt(const double& a) const override;
    double pow(const double& a, const double& b) const override;

    // Dispatched functions capture the concrete (final) type, so the inner
    // call devirtualizes; the tier defaults would go through the base vtable.
    std::optional<UnaryFn> unary_op(std::string_view op) const override;
    std::optional<BinaryFn> binary_op(std::string_view op) const override;
};

/// Complex field; no transcendental operations, constant `i`.
class ComplexField final : public FieldContext<ComplexValue> {
public:
    const char* name() const override { return "complex"; }

    std::optional<ComplexValue> constant(const Symbol& sym) const override;
    ComplexValue number(const NumericLiteral& lit) const override;

    ComplexValue add(const ComplexValue& a, const ComplexValue& b) const override;
    ComplexValue negate(const ComplexValue& a) const override;
    ComplexValue zero() const override { return {0.0, 0.0}; }
    ComplexValue scale(const ComplexValue& a, const NumericLiteral& k) const override;
    ComplexValue multiply(const ComplexValue& a, const ComplexValue& b) const override;
    ComplexValue one() const override { return {1.0, 0.0}; }
    ComplexValue divide(const ComplexValue& a, const ComplexValue& b) const override;
};

/// Checked signed 64-bit integer ring. Overflow is a reported error, never a
/// silent wrap; there is no division.
class IntegerRing final : public RingContext<std::int64_t> {
public:
    const char* name() const override { return "int"; }

    std::optional<std::int64_t> constant(const Symbol& sym) const override;
    std::int64_t number(const NumericLiteral& lit) const override;

    std::int64_t add(const std::int64_t& a, const std::int64_t& b) const override;
    std::int64_t negate(const std::int64_t& a) const override;
    std::int64_t zero() const override { return 0; }
    std::int64_t scale(const std::int64_t& a, const NumericLiteral& k) const override;
    std::int64_t subtract(const std::int64_t& a, const std::int64_t& b) const override;
    std::int64_t multiply(const std::int64_t& a, const std::int64_t& b) const override;
    std::int64_t one() const override { return 1; }
};

const RealField& real_field();
const ComplexField& complex_field();
const IntegerRing& integer_ring();

} // namespace mexpr
