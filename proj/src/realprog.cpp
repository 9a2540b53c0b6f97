#include "mexpr/compile.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <memory>
#include <unordered_map>

namespace mexpr {

namespace {

double ext_sin(double x) { return std::sin(x); }
double ext_cos(double x) { return std::cos(x); }
double ext_tan(double x) { return std::tan(x); }
double ext_asin(double x) { return std::asin(x); }
double ext_acos(double x) { return std::acos(x); }
double ext_atan(double x) { return std::atan(x); }
double ext_exp(double x) { return std::exp(x); }
double ext_ln(double x) { return std::log(x); }
double ext_sqrt(double x) { return std::sqrt(x); }
double ext_pow(double a, double b) { return std::pow(a, b); }

struct ExternSpec {
    std::string_view op;
    int arity;
    double (*fn1)(double);
    double (*fn2)(double, double);
};

constexpr std::array<ExternSpec, 10> kExterns = {{
    {"sin", 1, ext_sin, nullptr},
    {"cos", 1, ext_cos, nullptr},
    {"tan", 1, ext_tan, nullptr},
    {"asin", 1, ext_asin, nullptr},
    {"acos", 1, ext_acos, nullptr},
    {"atan", 1, ext_atan, nullptr},
    {"exp", 1, ext_exp, nullptr},
    {"ln", 1, ext_ln, nullptr},
    {"sqrt", 1, ext_sqrt, nullptr},
    {"pow", 2, nullptr, ext_pow},
}};

const ExternSpec* find_extern(std::string_view op) {
    for (const auto& e : kExterns)
        if (e.op == op)
            return &e;
    return nullptr;
}

class RealCompiler {
public:
    explicit RealCompiler(bool fold) : fold_(fold) {}

    RealProgram take() && { return std::move(prog_); }

    // Returns the subtree's compile-time value when folding and the subtree
    // is symbol-free; otherwise emits instructions and returns nullopt.
    std::optional<double> compile(const Mst& tree) {
        switch (tree.kind()) {
        case Mst::Kind::Number: {
            double v = tree.number_value().as_double();
            if (fold_)
                return v;
            emit_const(v);
            return std::nullopt;
        }
        case Mst::Kind::Symbol: {
            emit({ROp::LoadLocal, local_index(tree.symbol_value())});
            return std::nullopt;
        }
        case Mst::Kind::Unary: {
            auto operand = compile_child(tree.operand());
            if (tree.op() == "neg") {
                if (operand)
                    return fold_result(-*operand);
                flush(operand, tree.operand());
                emit({ROp::Neg});
                return std::nullopt;
            }
            const ExternSpec* ext = find_extern(tree.op());
            if (!ext)
                throw CompileError(CompileErrorKind::UnsupportedOperation, tree.op(),
                                   "real");
            if (operand)
                return fold_result(ext->fn1(*operand));
            flush(operand, tree.operand());
            emit({ROp::CallExternal, extern_index(*ext)});
            return std::nullopt;
        }
        case Mst::Kind::Binary: {
            const std::string& op = tree.op();
            if (op == "pow") {
                const ExternSpec* ext = find_extern("pow");
                auto l = compile_child(tree.left());
                if (l && !tree.right().contains_symbol()) {
                    auto r = compile_child(tree.right());
                    return fold_result(ext_pow(*l, *r));
                }
                flush(l, tree.left());
                auto r = compile_child(tree.right());
                flush(r, tree.right());
                emit({ROp::CallExternal, extern_index(*ext)});
                return std::nullopt;
            }
            ROp opcode;
            if (op == "+")
                opcode = ROp::Add;
            else if (op == "-")
                opcode = ROp::Sub;
            else if (op == "*")
                opcode = ROp::Mul;
            else if (op == "/")
                opcode = ROp::Div;
            else
                throw CompileError(CompileErrorKind::UnsupportedOperation, op, "real");
            auto l = compile_child(tree.left());
            if (l && !tree.right().contains_symbol()) {
                auto r = compile_child(tree.right());
                switch (opcode) {
                case ROp::Add: return fold_result(*l + *r);
                case ROp::Sub: return fold_result(*l - *r);
                case ROp::Mul: return fold_result(*l * *r);
                default: return fold_result(*l / *r);
                }
            }
            flush(l, tree.left());
            auto r = compile_child(tree.right());
            flush(r, tree.right());
            emit(RInstr{opcode});
            return std::nullopt;
        }
        }
        throw CompileError(CompileErrorKind::UnsupportedOperation, "?", "real");
    }

    void finish(std::optional<double> root_value) {
        if (root_value)
            emit_const(*root_value);
        std::uint32_t depth = 0, max_depth = 0;
        for (const RInstr& ins : prog_.instructions) {
            switch (ins.op) {
            case ROp::ConstF64:
            case ROp::LoadLocal:
                ++depth;
                break;
            case ROp::Add:
            case ROp::Sub:
            case ROp::Mul:
            case ROp::Div:
                --depth;
                break;
            case ROp::Neg:
                break;
            case ROp::CallExternal:
                depth -= static_cast<std::uint32_t>(
                    prog_.extern_table[ins.index].arity - 1);
                break;
            }
            if (depth > max_depth)
                max_depth = depth;
        }
        prog_.max_stack = max_depth;
    }

private:
    std::optional<double> compile_child(const Mst& tree) {
        if (fold_ && !tree.contains_symbol())
            return compile(tree); // guaranteed to return a value
        return compile(tree), std::nullopt;
    }

    // A folded child value meeting a non-foldable parent becomes a constant.
    void flush(std::optional<double>& value, const Mst&) {
        if (value) {
            emit_const(*value);
            value.reset();
        }
    }

    std::optional<double> fold_result(double v) { return v; }

    void emit(RInstr ins) { prog_.instructions.push_back(ins); }

    void emit_const(double v) {
        emit({ROp::ConstF64, static_cast<std::uint16_t>(prog_.const_pool.size())});
        prog_.const_pool.push_back(v);
    }

    std::uint16_t local_index(const Symbol& sym) {
        auto it = symbol_index_.find(sym.name());
        if (it != symbol_index_.end())
            return it->second;
        auto idx = static_cast<std::uint16_t>(prog_.symbols.size());
        prog_.symbols.push_back(sym);
        prog_.constant_fallbacks.push_back(real_field().constant(sym));
        symbol_index_.emplace(sym.name(), idx);
        return idx;
    }

    std::uint16_t extern_index(const ExternSpec& spec) {
        auto it = extern_index_.find(std::string(spec.op));
        if (it != extern_index_.end())
            return it->second;
        auto idx = static_cast<std::uint16_t>(prog_.extern_table.size());
        ExternEntry entry;
        entry.name = std::string(spec.op);
        entry.arity = spec.arity;
        entry.fn1 = spec.fn1;
        entry.fn2 = spec.fn2;
        prog_.extern_table.push_back(std::move(entry));
        extern_index_.emplace(std::string(spec.op), idx);
        return idx;
    }

    bool fold_;
    RealProgram prog_;
    std::unordered_map<std::string, std::uint16_t> symbol_index_;
    std::unordered_map<std::string, std::uint16_t> extern_index_;
};

} // namespace

RealProgram compile_real(const Mst& tree, bool fold) {
    RealCompiler compiler(fold);
    std::optional<double> root;
    if (fold && !tree.contains_symbol())
        root = compiler.compile(tree);
    else
        compiler.compile(tree);
    compiler.finish(root);
    RealProgram prog = std::move(compiler).take();
    return prog;
}

namespace {

double exec_real(const RealProgram& prog, const Bindings<double>& bindings,
                 double* scratch) {
    // scratch area: locals first, then the value stack
    double* locals = scratch;
    double* stack = locals + prog.symbols.size();

    for (std::size_t i = 0; i < prog.symbols.size(); ++i) {
        const double* v = bindings.find(prog.symbols[i]);
        if (!v && prog.constant_fallbacks[i])
            v = &*prog.constant_fallbacks[i];
        if (!v)
            throw EvalError(EvalErrorKind::UnboundSymbol, prog.symbols[i].name(), "real");
        locals[i] = *v;
    }

    // hoisted: stores through sp could otherwise alias the program's members
    const double* consts = prog.const_pool.data();
    const ExternEntry* externs = prog.extern_table.data();
    const RInstr* ip = prog.instructions.data();
    const RInstr* ins_end = ip + prog.instructions.size();
    double* sp = stack;

#if defined(__GNUC__)
    // threaded dispatch: one indirect jump per handler predicts far better
    // than a single shared switch jump
    static const void* kLabels[] = {&&l_const, &&l_local, &&l_add, &&l_sub,
                                    &&l_mul,   &&l_div,   &&l_neg, &&l_call};
#define MEXPR_DISPATCH()                                                               \
    if (ip == ins_end)                                                                 \
        return sp[-1];                                                                 \
    goto* kLabels[static_cast<std::uint8_t>(ip->op)]

    MEXPR_DISPATCH();
l_const:
    *sp++ = consts[ip->index];
    ++ip;
    MEXPR_DISPATCH();
l_local:
    *sp++ = locals[ip->index];
    ++ip;
    MEXPR_DISPATCH();
l_add:
    sp[-2] = sp[-2] + sp[-1];
    --sp;
    ++ip;
    MEXPR_DISPATCH();
l_sub:
    sp[-2] = sp[-2] - sp[-1];
    --sp;
    ++ip;
    MEXPR_DISPATCH();
l_mul:
    sp[-2] = sp[-2] * sp[-1];
    --sp;
    ++ip;
    MEXPR_DISPATCH();
l_div:
    sp[-2] = sp[-2] / sp[-1];
    --sp;
    ++ip;
    MEXPR_DISPATCH();
l_neg:
    sp[-1] = -sp[-1];
    ++ip;
    MEXPR_DISPATCH();
l_call: {
    const ExternEntry& ext = externs[ip->index];
    if (ext.arity == 1) {
        sp[-1] = ext.fn1(sp[-1]);
    } else {
        sp[-2] = ext.fn2(sp[-2], sp[-1]);
        --sp;
    }
    ++ip;
    MEXPR_DISPATCH();
}
#undef MEXPR_DISPATCH
#else
    for (; ip != ins_end; ++ip) {
        const RInstr& ins = *ip;
        switch (ins.op) {
        case ROp::ConstF64:
            *sp++ = consts[ins.index];
            break;
        case ROp::LoadLocal:
            *sp++ = locals[ins.index];
            break;
        case ROp::Add:
            sp[-2] = sp[-2] + sp[-1];
            --sp;
            break;
        case ROp::Sub:
            sp[-2] = sp[-2] - sp[-1];
            --sp;
            break;
        case ROp::Mul:
            sp[-2] = sp[-2] * sp[-1];
            --sp;
            break;
        case ROp::Div:
            sp[-2] = sp[-2] / sp[-1];
            --sp;
            break;
        case ROp::Neg:
            sp[-1] = -sp[-1];
            break;
        case ROp::CallExternal: {
            const ExternEntry& ext = externs[ins.index];
            if (ext.arity == 1) {
                sp[-1] = ext.fn1(sp[-1]);
            } else {
                sp[-2] = ext.fn2(sp[-2], sp[-1]);
                --sp;
            }
            break;
        }
        }
    }
    return sp[-1];
#endif
}

} // namespace

double run_real(const RealProgram& prog, const Bindings<double>& bindings) {
    const std::size_t need = prog.symbols.size() + prog.max_stack;
    // common case: scratch fits on the execution stack, no TLS access
    constexpr std::size_t kInlineScratch = 64;
    if (need <= kInlineScratch) {
        double scratch[kInlineScratch];
        return exec_real(prog, bindings, scratch);
    }
    static thread_local std::vector<double> scratch;
    if (scratch.size() < need)
        scratch.resize(need);
    return exec_real(prog, bindings, scratch.data());
}

std::optional<ValidationError> validate(const RealProgram& prog) {
    if (prog.constant_fallbacks.size() != prog.symbols.size())
        return ValidationError{"constant_fallbacks does not match symbols", 0};
    std::int64_t depth = 0;
    std::int64_t max_depth = 0;
    for (std::size_t i = 0; i < prog.instructions.size(); ++i) {
        const RInstr& ins = prog.instructions[i];
        switch (ins.op) {
        case ROp::ConstF64:
            if (ins.index >= prog.const_pool.size())
                return ValidationError{"constant pool index out of range", i};
            ++depth;
            break;
        case ROp::LoadLocal:
            if (ins.index >= prog.symbols.size())
                return ValidationError{"local index out of range", i};
            ++depth;
            break;
        case ROp::Add:
        case ROp::Sub:
        case ROp::Mul:
        case ROp::Div:
            if (depth < 2)
                return ValidationError{"stack underflow", i};
            --depth;
            break;
        case ROp::Neg:
            if (depth < 1)
                return ValidationError{"stack underflow", i};
            break;
        case ROp::CallExternal: {
            if (ins.index >= prog.extern_table.size())
                return ValidationError{"extern table index out of range", i};
            const ExternEntry& ext = prog.extern_table[ins.index];
            if (ext.arity != 1 && ext.arity != 2)
                return ValidationError{"extern entry has invalid arity", i};
            if (ext.arity == 1 && !ext.fn1)
                return ValidationError{"extern entry missing unary function", i};
            if (ext.arity == 2 && !ext.fn2)
                return ValidationError{"extern entry missing binary function", i};
            if (depth < ext.arity)
                return ValidationError{"stack underflow", i};
            depth -= ext.arity - 1;
            break;
        }
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

// --- portable text ---------------------------------------------------------

namespace {

/// Shortest decimal string that round-trips to the same double; integral
/// values print without a decimal point (so 2.0 renders as "2").
std::string format_f64(double v) {
    std::array<char, 32> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

struct EmitNode {
    std::string head;                    // e.g. "f64.add", "local.get $0"
    std::vector<std::unique_ptr<EmitNode>> children;
};

void print_node(const EmitNode& n, std::string& out, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (n.children.empty()) {
        out += pad + "(" + n.head + ")\n";
        return;
    }
    out += pad + "(" + n.head + "\n";
    for (const auto& c : n.children)
        print_node(*c, out, indent + 1);
    out += pad + ")\n";
}

} // namespace

std::string emit_portable_text(const RealProgram& prog) {
    std::vector<std::unique_ptr<EmitNode>> stack;
    auto pop = [&]() {
        auto n = std::move(stack.back());
        stack.pop_back();
        return n;
    };
    auto push_op = [&](std::string head, int arity) {
        auto node = std::make_unique<EmitNode>();
        node->head = std::move(head);
        node->children.resize(static_cast<std::size_t>(arity));
        for (int i = arity - 1; i >= 0; --i)
            node->children[static_cast<std::size_t>(i)] = pop();
        stack.push_back(std::move(node));
    };

    for (const RInstr& ins : prog.instructions) {
        switch (ins.op) {
        case ROp::ConstF64:
            push_op("f64.const " + format_f64(prog.const_pool[ins.index]), 0);
            break;
        case ROp::LoadLocal:
            push_op("local.get $" + std::to_string(ins.index), 0);
            break;
        case ROp::Add: push_op("f64.add", 2); break;
        case ROp::Sub: push_op("f64.sub", 2); break;
        case ROp::Mul: push_op("f64.mul", 2); break;
        case ROp::Div: push_op("f64.div", 2); break;
        case ROp::Neg: push_op("f64.neg", 1); break;
        case ROp::CallExternal: {
            const ExternEntry& ext = prog.extern_table[ins.index];
            push_op("call $" + ext.name, ext.arity);
            break;
        }
        }
    }

    std::string header = "(func $executable";
    for (std::size_t i = 0; i < prog.symbols.size(); ++i)
        header += " (param $" + std::to_string(i) + " f64)";
    header += " (result f64)\n";

    std::string out = header;
    print_node(*stack.back(), out, 1);
    out += ")\n";
    return out;
}

} // namespace mexpr
