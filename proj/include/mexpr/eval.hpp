#pragma once

#include <functional>
#include <memory>
#include <vector>
#include <utility>

#include "mexpr/algebra.hpp"
#include "mexpr/errors.hpp"
#include "mexpr/mst.hpp"

namespace mexpr {

/// Symbol-to-value map supplied at evaluation time. Binding sets are tiny in
/// practice, so this is a flat array with linear lookup (cheaper than any
/// hash map at these sizes, and lookup is on every backend's hot path).
template <class T>
class Bindings {
public:
    Bindings() = default;
    Bindings(std::initializer_list<std::pair<const char*, T>> init) {
        for (auto& [name, value] : init)
            set(Symbol(name), value);
    }

    void set(Symbol sym, T value) {
        if (T* present = find_mut(sym)) {
            *present = std::move(value);
            return;
        }
        entries_.emplace_back(std::move(sym), std::move(value));
    }

    const T* find(const Symbol& sym) const {
        for (const auto& [key, value] : entries_)
            if (key == sym)
                return &value;
        return nullptr;
    }

    bool contains(const Symbol& sym) const { return find(sym) != nullptr; }
    std::size_t size() const { return entries_.size(); }

private:
    T* find_mut(const Symbol& sym) {
        for (auto& [key, value] : entries_)
            if (key == sym)
                return &value;
        return nullptr;
    }

    std::vector<std::pair<Symbol, T>> entries_;
};

/// An evaluatable expression: invoke takes bindings and produces a value.
/// Pure with respect to bindings and safe to invoke concurrently.
template <class T>
class Expression {
public:
    explicit Expression(std::function<T(const Bindings<T>&)> fn) : fn_(std::move(fn)) {}

    T invoke(const Bindings<T>& bindings) const { return fn_(bindings); }
    T operator()(const Bindings<T>& bindings) const { return fn_(bindings); }

private:
    std::function<T(const Bindings<T>&)> fn_;
};

/// Recursive MST interpretation. Symbols resolve from bindings first, then
/// from the context's constants (bindings shadow algebra constants).
/// Dispatch happens at every node on every call; nothing is cached.
///
/// noinline: recursion means the body is mostly out-of-line anyway; one
/// canonical instantiation keeps performance uniform across call sites.
template <class T>
#if defined(__GNUC__)
__attribute__((noinline))
#endif
T interpret(const Mst& tree, const AlgebraContext<T>& ctx, const Bindings<T>& bindings) {
    switch (tree.kind()) {
    case Mst::Kind::Number:
        return ctx.number(tree.number_value());
    case Mst::Kind::Symbol: {
        const Symbol& sym = tree.symbol_value();
        if (const T* bound = bindings.find(sym))
            return *bound;
        if (auto c = ctx.constant(sym))
            return *c;
        throw EvalError(EvalErrorKind::UnboundSymbol, sym.name(), ctx.name());
    }
    case Mst::Kind::Unary: {
        T operand = interpret(tree.operand(), ctx, bindings);
        return dispatch_unary(ctx, tree.op())(operand);
    }
    case Mst::Kind::Binary: {
        T lhs = interpret(tree.left(), ctx, bindings);
        T rhs = interpret(tree.right(), ctx, bindings);
        return dispatch_binary(ctx, tree.op())(lhs, rhs);
    }
    }
    throw EvalError(EvalErrorKind::UnsupportedOperation, "?", ctx.name());
}

// one canonical copy of the common instantiation lives in the library, so
// every binary measures the same code
extern template double interpret<double>(const Mst&, const AlgebraContext<double>&,
                                         const Bindings<double>&);

/// Pairs a tree with a context; all resolution stays late-bound, errors
/// surface at invoke time.
template <class T>
Expression<T> mst_expression(Mst tree, const AlgebraContext<T>& ctx) {
    return Expression<T>([tree = std::move(tree), &ctx](const Bindings<T>& b) {
        return interpret(tree, ctx, b);
    });
}

namespace detail {

// Closure-tree nodes. All dispatch and literal embedding happens once at
// build time; invoking performs no name-based lookups.
template <class T>
struct FunctionalNode {
    virtual ~FunctionalNode() = default;
    virtual T eval(const Bindings<T>& b) const = 0;
};

template <class T>
struct ConstNode final : FunctionalNode<T> {
    T value;
    explicit ConstNode(T v) : value(std::move(v)) {}
    T eval(const Bindings<T>&) const override { return value; }
};

template <class T>
struct SymbolLeaf final : FunctionalNode<T> {
    Symbol sym;
    std::optional<T> fallback; // context constant, shadowed by bindings
    const char* ctx_name;
    SymbolLeaf(Symbol s, std::optional<T> fb, const char* ctx)
        : sym(std::move(s)), fallback(std::move(fb)), ctx_name(ctx) {}
    T eval(const Bindings<T>& b) const override {
        if (const T* bound = b.find(sym))
            return *bound;
        if (fallback)
            return *fallback;
        throw EvalError(EvalErrorKind::UnboundSymbol, sym.name(), ctx_name);
    }
};

template <class T>
struct UnaryClosure final : FunctionalNode<T> {
    typename AlgebraContext<T>::UnaryFn fn;
    std::unique_ptr<FunctionalNode<T>> operand;
    UnaryClosure(typename AlgebraContext<T>::UnaryFn f,
                 std::unique_ptr<FunctionalNode<T>> node)
        : fn(std::move(f)), operand(std::move(node)) {}
    T eval(const Bindings<T>& b) const override { return fn(operand->eval(b)); }
};

template <class T>
struct BinaryClosure final : FunctionalNode<T> {
    typename AlgebraContext<T>::BinaryFn fn;
    std::unique_ptr<FunctionalNode<T>> lhs;
    std::unique_ptr<FunctionalNode<T>> rhs;
    BinaryClosure(typename AlgebraContext<T>::BinaryFn f,
                  std::unique_ptr<FunctionalNode<T>> l,
                  std::unique_ptr<FunctionalNode<T>> r)
        : fn(std::move(f)), lhs(std::move(l)), rhs(std::move(r)) {}
    T eval(const Bindings<T>& b) const override { return fn(lhs->eval(b), rhs->eval(b)); }
};

template <class T>
std::unique_ptr<FunctionalNode<T>> build_functional_node(const Mst& tree,
                                                         const AlgebraContext<T>& ctx) {
    switch (tree.kind()) {
    case Mst::Kind::Number:
        return std::make_unique<ConstNode<T>>(ctx.number(tree.number_value()));
    case Mst::Kind::Symbol:
        return std::make_unique<SymbolLeaf<T>>(tree.symbol_value(),
                                               ctx.constant(tree.symbol_value()),
                                               ctx.name());
    case Mst::Kind::Unary: {
        auto fn = ctx.unary_op(tree.op());
        if (!fn)
            throw CompileError(CompileErrorKind::UnsupportedOperation, tree.op(),
                               ctx.name());
        return std::make_unique<UnaryClosure<T>>(
            std::move(*fn), build_functional_node(tree.operand(), ctx));
    }
    case Mst::Kind::Binary: {
        auto fn = ctx.binary_op(tree.op());
        if (!fn)
            throw CompileError(CompileErrorKind::UnsupportedOperation, tree.op(),
                               ctx.name());
        return std::make_unique<BinaryClosure<T>>(std::move(*fn),
                                                  build_functional_node(tree.left(), ctx),
                                                  build_functional_node(tree.right(), ctx));
    }
    }
    throw CompileError(CompileErrorKind::UnsupportedOperation, "?", ctx.name());
}

} // namespace detail

/// Builds a tree of closure nodes, one per MST node. Unsupported operations
/// fail eagerly here, not at invoke time. Agrees with `interpret` bitwise on
/// all inputs (both paths call the very same context functions).
template <class T>
Expression<T> build_functional(const Mst& tree, const AlgebraContext<T>& ctx) {
    std::shared_ptr<detail::FunctionalNode<T>> root =
        detail::build_functional_node(tree, ctx);
    return Expression<T>(
        [root = std::move(root)](const Bindings<T>& b) { return root->eval(b); });
}

} // namespace mexpr
