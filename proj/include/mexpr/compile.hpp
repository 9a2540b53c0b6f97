#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mexpr/algebra.hpp"
#include "mexpr/errors.hpp"
#include "mexpr/eval.hpp"
#include "mexpr/mst.hpp"

namespace mexpr {

// ---------------------------------------------------------------------------
// Generic stack program: works for any algebra context. Operation functions
// are resolved once at compile time and stored in the constants pool next to
// literal values; execution performs zero by-name lookups.

enum class GOp : std::uint8_t { LoadConst, LoadBinding, CallUnary, CallBinary };

struct GInstr {
    GOp op;
    std::uint32_t index; // pool index, or symbol index for LoadBinding
};

template <class T>
struct GenericProgram {
    using UnaryFn = typename AlgebraContext<T>::UnaryFn;
    using BinaryFn = typename AlgebraContext<T>::BinaryFn;
    using PoolEntry = std::variant<T, UnaryFn, BinaryFn>;

    std::vector<GInstr> instructions;
    std::vector<PoolEntry> pool;
    std::vector<Symbol> symbols; // indexed by LoadBinding, first-occurrence order
    // per-symbol context constant, used when the symbol is not bound
    std::vector<std::optional<T>> constant_fallbacks;
    std::uint32_t max_stack = 0;
    const char* ctx_name = "";
};

namespace detail {

template <class T>
void collect_fn_pool(const Mst& tree, const AlgebraContext<T>& ctx,
                     GenericProgram<T>& prog,
                     std::unordered_map<std::string, std::uint32_t>& unary_pool,
                     std::unordered_map<std::string, std::uint32_t>& binary_pool) {
    // pre-order, so operation entries come before value entries, one per
    // distinct operation name
    switch (tree.kind()) {
    case Mst::Kind::Symbol:
    case Mst::Kind::Number:
        return;
    case Mst::Kind::Unary: {
        if (!unary_pool.contains(tree.op())) {
            auto fn = ctx.unary_op(tree.op());
            if (!fn)
                throw CompileError(CompileErrorKind::UnsupportedOperation, tree.op(),
                                   ctx.name());
            unary_pool.emplace(tree.op(), static_cast<std::uint32_t>(prog.pool.size()));
            prog.pool.emplace_back(std::move(*fn));
        }
        collect_fn_pool(tree.operand(), ctx, prog, unary_pool, binary_pool);
        return;
    }
    case Mst::Kind::Binary: {
        if (!binary_pool.contains(tree.op())) {
            auto fn = ctx.binary_op(tree.op());
            if (!fn)
                throw CompileError(CompileErrorKind::UnsupportedOperation, tree.op(),
                                   ctx.name());
            binary_pool.emplace(tree.op(), static_cast<std::uint32_t>(prog.pool.size()));
            prog.pool.emplace_back(typename GenericProgram<T>::PoolEntry(
                std::in_place_index<2>, std::move(*fn)));
        }
        collect_fn_pool(tree.left(), ctx, prog, unary_pool, binary_pool);
        collect_fn_pool(tree.right(), ctx, prog, unary_pool, binary_pool);
        return;
    }
    }
}

template <class T>
void emit_generic(const Mst& tree, const AlgebraContext<T>& ctx, GenericProgram<T>& prog,
                  const std::unordered_map<std::string, std::uint32_t>& unary_pool,
                  const std::unordered_map<std::string, std::uint32_t>& binary_pool,
                  std::unordered_map<std::string, std::uint32_t>& symbol_index) {
    switch (tree.kind()) {
    case Mst::Kind::Number:
        prog.instructions.push_back(
            {GOp::LoadConst, static_cast<std::uint32_t>(prog.pool.size())});
        prog.pool.emplace_back(ctx.number(tree.number_value()));
        return;
    case Mst::Kind::Symbol: {
        const std::string& name = tree.symbol_value().name();
        auto it = symbol_index.find(name);
        std::uint32_t idx;
        if (it == symbol_index.end()) {
            idx = static_cast<std::uint32_t>(prog.symbols.size());
            prog.symbols.push_back(tree.symbol_value());
            prog.constant_fallbacks.push_back(ctx.constant(tree.symbol_value()));
            symbol_index.emplace(name, idx);
        } else {
            idx = it->second;
        }
        prog.instructions.push_back({GOp::LoadBinding, idx});
        return;
    }
    case Mst::Kind::Unary:
        emit_generic(tree.operand(), ctx, prog, unary_pool, binary_pool, symbol_index);
        prog.instructions.push_back({GOp::CallUnary, unary_pool.at(tree.op())});
        return;
    case Mst::Kind::Binary:
        emit_generic(tree.left(), ctx, prog, unary_pool, binary_pool, symbol_index);
        emit_generic(tree.right(), ctx, prog, unary_pool, binary_pool, symbol_index);
        prog.instructions.push_back({GOp::CallBinary, binary_pool.at(tree.op())});
        return;
    }
}

} // namespace detail

/// Post-order linearization of the tree into a stack program. Each distinct
/// operation name resolves to one pool entry; literals are embedded through
/// ctx.number at compile time. Fails eagerly on unsupported operations.
template <class T>
GenericProgram<T> compile_generic(const Mst& tree, const AlgebraContext<T>& ctx) {
    GenericProgram<T> prog;
    prog.ctx_name = ctx.name();
    std::unordered_map<std::string, std::uint32_t> unary_pool, binary_pool, symbol_index;
    detail::collect_fn_pool(tree, ctx, prog, unary_pool, binary_pool);
    detail::emit_generic(tree, ctx, prog, unary_pool, binary_pool, symbol_index);
    std::uint32_t depth = 0, max_depth = 0;
    for (const GInstr& ins : prog.instructions) {
        if (ins.op == GOp::LoadConst || ins.op == GOp::LoadBinding)
            ++depth;
        else if (ins.op == GOp::CallBinary)
            --depth;
        if (depth > max_depth)
            max_depth = depth;
    }
    prog.max_stack = max_depth;
    return prog;
}

namespace detail {

// The scratch area holds the resolved locals followed by the value stack.
// max_stack is a proven bound, so the loop below can move a raw pointer
// without per-push capacity checks.
//
// noinline: the dispatch loop's code quality is sensitive to the inlining
// context; one out-of-line instantiation keeps performance uniform across
// call sites.
template <class T>
#if defined(__GNUC__)
__attribute__((noinline))
#endif
T exec_generic(const GenericProgram<T>& prog, const Bindings<T>& bindings,
               T* scratch) {
    const std::size_t n_locals = prog.symbols.size();
    T* locals = scratch;
    T* sp = locals + n_locals;

    // resolve each distinct symbol once per execution, by value
    for (std::size_t i = 0; i < n_locals; ++i) {
        if (const T* v = bindings.find(prog.symbols[i]))
            locals[i] = *v;
        else if (prog.constant_fallbacks[i])
            locals[i] = *prog.constant_fallbacks[i];
        else
            throw EvalError(EvalErrorKind::UnboundSymbol, prog.symbols[i].name(),
                            prog.ctx_name);
    }

    const auto* pool = prog.pool.data();
    const GInstr* ip = prog.instructions.data();
    const GInstr* ip_end = ip + prog.instructions.size();

    // compile_generic only ever produces type-correct pool references (see
    // validate), so the per-instruction variant type re-checks can be
    // discarded from the hot loop
    auto assume = [](const auto* p) {
        if (!p) {
#if defined(__GNUC__)
            __builtin_unreachable();
#endif
        }
        return p;
    };

#if defined(__GNUC__)
    // threaded dispatch: each handler ends in its own indirect jump, which
    // predicts better than one shared dispatch branch
    static const void* kLabels[] = {&&l_const, &&l_binding, &&l_unary, &&l_binary};
#define MEXPR_G_DISPATCH()                                                             \
    if (ip == ip_end)                                                                  \
        return sp[-1];                                                                 \
    goto* kLabels[static_cast<std::uint8_t>(ip->op)]

    MEXPR_G_DISPATCH();
l_const:
    *sp++ = *assume(std::get_if<0>(pool + ip->index));
    ++ip;
    MEXPR_G_DISPATCH();
l_binding:
    *sp++ = locals[ip->index];
    ++ip;
    MEXPR_G_DISPATCH();
l_unary:
    sp[-1] = (*assume(std::get_if<1>(pool + ip->index)))(sp[-1]);
    ++ip;
    MEXPR_G_DISPATCH();
l_binary:
    sp[-2] = (*assume(std::get_if<2>(pool + ip->index)))(sp[-2], sp[-1]);
    --sp;
    ++ip;
    MEXPR_G_DISPATCH();
#undef MEXPR_G_DISPATCH
#else
    for (; ip != ip_end; ++ip) {
        switch (ip->op) {
        case GOp::LoadConst:
            *sp++ = *assume(std::get_if<0>(pool + ip->index));
            break;
        case GOp::LoadBinding:
            *sp++ = locals[ip->index];
            break;
        case GOp::CallUnary:
            sp[-1] = (*assume(std::get_if<1>(pool + ip->index)))(sp[-1]);
            break;
        case GOp::CallBinary:
            sp[-2] = (*assume(std::get_if<2>(pool + ip->index)))(sp[-2], sp[-1]);
            --sp;
            break;
        }
    }
    return sp[-1];
#endif
}

// one canonical copy of the common instantiation lives in the library, so
// every binary measures the same code
extern template double exec_generic<double>(const GenericProgram<double>&,
                                            const Bindings<double>&, double*);

} // namespace detail

/// Executes a compiled generic program. The only possible runtime errors are
/// unbound symbols and, for checked contexts, arithmetic overflow.
template <class T>
T run_generic(const GenericProgram<T>& prog, const Bindings<T>& bindings) {
    const std::size_t need = prog.symbols.size() + prog.max_stack;
    if constexpr (std::is_trivially_default_constructible_v<T> &&
                  std::is_trivially_destructible_v<T>) {
        // common case: scratch fits on the execution stack, no TLS access
        constexpr std::size_t kInlineScratch = 64;
        if (need <= kInlineScratch) {
            T scratch[kInlineScratch];
            return detail::exec_generic(prog, bindings, scratch);
        }
    }
    static thread_local std::vector<T> scratch;
    if (scratch.size() < need)
        scratch.resize(need);
    return detail::exec_generic(prog, bindings, scratch.data());
}

/// Checks the type/index/stack invariants of a generic program.
template <class T>
std::optional<ValidationError> validate(const GenericProgram<T>& prog) {
    if (prog.constant_fallbacks.size() != prog.symbols.size())
        return ValidationError{"constant_fallbacks does not match symbols", 0};
    std::int64_t depth = 0;
    std::int64_t max_depth = 0;
    for (std::size_t i = 0; i < prog.instructions.size(); ++i) {
        const GInstr& ins = prog.instructions[i];
        switch (ins.op) {
        case GOp::LoadConst:
            if (ins.index >= prog.pool.size())
                return ValidationError{"pool index out of range", i};
            if (prog.pool[ins.index].index() != 0)
                return ValidationError{"LoadConst pool entry is not a value", i};
            ++depth;
            break;
        case GOp::LoadBinding:
            if (ins.index >= prog.symbols.size())
                return ValidationError{"symbol index out of range", i};
            ++depth;
            break;
        case GOp::CallUnary:
            if (ins.index >= prog.pool.size())
                return ValidationError{"pool index out of range", i};
            if (prog.pool[ins.index].index() != 1)
                return ValidationError{"CallUnary pool entry is not a unary function", i};
            if (depth < 1)
                return ValidationError{"stack underflow", i};
            break;
        case GOp::CallBinary:
            if (ins.index >= prog.pool.size())
                return ValidationError{"pool index out of range", i};
            if (prog.pool[ins.index].index() != 2)
                return ValidationError{"CallBinary pool entry is not a binary function",
                                       i};
            if (depth < 2)
                return ValidationError{"stack underflow", i};
            --depth;
            break;
        }
        if (depth > max_depth)
            max_depth = depth;
    }
    if (depth != 1)
        return ValidationError{"stack effect of program is not +1",
                               prog.instructions.size()};
    if (max_depth > prog.max_stack)
        return ValidationError{"max_stack bound is too small", prog.instructions.size()};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Specialized double-precision program: arithmetic is inline opcodes, only
// transcendentals (and pow) go through the external function table.

enum class ROp : std::uint8_t { ConstF64, LoadLocal, Add, Sub, Mul, Div, Neg, CallExternal };

struct RInstr {
    ROp op;
    std::uint16_t index = 0; // const pool / local / extern table index
};

struct ExternEntry {
    std::string name;
    int arity = 1;
    double (*fn1)(double) = nullptr;
    double (*fn2)(double, double) = nullptr;
};

struct RealProgram {
    std::vector<RInstr> instructions;
    std::vector<double> const_pool;
    std::vector<ExternEntry> extern_table;
    std::vector<Symbol> symbols; // local index = first occurrence, pre-order
    // per-symbol real-field constant (pi, e), used when unbound
    std::vector<std::optional<double>> constant_fallbacks;
    std::uint32_t max_stack = 0;
};

/// Lowers a tree to the specialized double program. With fold=true every
/// symbol-free subtree is evaluated at compile time into a single constant;
/// folding uses exactly the runtime's IEEE operations, so it never changes
/// results.
RealProgram compile_real(const Mst& tree, bool fold = false);

double run_real(const RealProgram& prog, const Bindings<double>& bindings);

std::optional<ValidationError> validate(const RealProgram& prog);

/// Renders the program in the portable WAT-like text form:
/// (func $executable (param $0 f64) (result f64) ...).
std::string emit_portable_text(const RealProgram& prog);

} // namespace mexpr
