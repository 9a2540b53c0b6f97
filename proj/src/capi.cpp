#include "mexpr/mexpr.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <type_traits>
#include <variant>

#include "mexpr/autodiff.hpp"
#include "mexpr/bench.hpp"
#include "mexpr/compile.hpp"
#include "mexpr/eval.hpp"
#include "mexpr/parser.hpp"

using namespace mexpr;

struct mexpr_tree {
    Mst m;
};

struct mexpr_bindings {
    mexpr_algebra algebra;
    Bindings<double> real;
    Bindings<ComplexValue> cplx;
    Bindings<std::int64_t> ints;
};

struct mexpr_expr {
    mexpr_algebra algebra;
    std::variant<Expression<double>, Expression<ComplexValue>,
                 Expression<std::int64_t>>
        e;
};

namespace {

void set_error(mexpr_error* err, mexpr_status status, const char* message,
               std::size_t offset = 0) {
    if (!err)
        return;
    err->status = status;
    err->offset = offset;
    std::snprintf(err->message, sizeof(err->message), "%s", message);
}

void clear_error(mexpr_error* err) { set_error(err, MEXPR_OK, ""); }

mexpr_status status_of(const EvalError& e) {
    switch (e.kind()) {
    case EvalErrorKind::UnboundSymbol:
        return MEXPR_ERR_UNBOUND_SYMBOL;
    case EvalErrorKind::UnsupportedOperation:
        return MEXPR_ERR_UNSUPPORTED_OP;
    case EvalErrorKind::ArithmeticOverflow:
        return MEXPR_ERR_OVERFLOW;
    }
    return MEXPR_ERR_INVALID;
}

mexpr_status status_of(const CompileError& e) {
    return e.kind() == CompileErrorKind::NotRealField ? MEXPR_ERR_NOT_REAL
                                                     : MEXPR_ERR_UNSUPPORTED_OP;
}

// Runs `fn`, translating the C++ error idiom into the C one. Pointer-returning
// calls yield NULL on failure, int-returning calls yield the status code.
template <class Fn>
auto guarded(mexpr_error* err, Fn&& fn) -> decltype(fn()) {
    clear_error(err);
    mexpr_status status = MEXPR_OK;
    try {
        return fn();
    } catch (const ParseError& e) {
        status = MEXPR_ERR_PARSE;
        set_error(err, status, e.message().c_str(), e.offset());
    } catch (const EvalError& e) {
        status = status_of(e);
        set_error(err, status, e.what());
    } catch (const CompileError& e) {
        status = status_of(e);
        set_error(err, status, e.what());
    } catch (const std::exception& e) {
        status = MEXPR_ERR_INVALID;
        set_error(err, status, e.what());
    }
    using Ret = decltype(fn());
    if constexpr (std::is_pointer_v<Ret>)
        return nullptr;
    else
        return static_cast<Ret>(status);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const AlgebraContext<double>& real_ctx() { return real_field(); }

template <class T>
Expression<T> make_backend(const Mst& tree, const AlgebraContext<T>& ctx,
                           mexpr_backend backend) {
    switch (backend) {
    case MEXPR_BACKEND_INTERPRET:
        return mst_expression(tree, ctx);
    case MEXPR_BACKEND_FUNCTIONAL:
        return build_functional(tree, ctx);
    case MEXPR_BACKEND_COMPILED: {
        auto prog = std::make_shared<GenericProgram<T>>(compile_generic(tree, ctx));
        return Expression<T>(
            [prog](const Bindings<T>& b) { return run_generic(*prog, b); });
    }
    default:
        throw CompileError(CompileErrorKind::NotRealField, "", ctx.name());
    }
}

} // namespace

extern "C" {

const char* mexpr_version(void) { return "1.0.0"; }

void mexpr_string_free(char* s) { std::free(s); }

/* --- trees ---------------------------------------------------------------- */

mexpr_tree* mexpr_parse(const char* source, mexpr_error* err) {
    if (!source) {
        set_error(err, MEXPR_ERR_INVALID, "source is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        return new mexpr_tree{parse(source)};
    });
}

mexpr_tree* mexpr_tree_from_json(const char* json, mexpr_error* err) {
    if (!json) {
        set_error(err, MEXPR_ERR_INVALID, "json is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        return new mexpr_tree{from_json(json)};
    });
}

mexpr_tree* mexpr_tree_clone(const mexpr_tree* t) {
    return t ? new mexpr_tree{t->m} : nullptr;
}

void mexpr_tree_free(mexpr_tree* t) { delete t; }

mexpr_tree* mexpr_tree_symbol(const char* name, mexpr_error* err) {
    if (!name) {
        set_error(err, MEXPR_ERR_INVALID, "name is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        return new mexpr_tree{Mst::symbol(Symbol(name))};
    });
}

mexpr_tree* mexpr_tree_int(int64_t value) {
    return new mexpr_tree{Mst::integer(value)};
}

mexpr_tree* mexpr_tree_decimal(const char* text, mexpr_error* err) {
    if (!text) {
        set_error(err, MEXPR_ERR_INVALID, "text is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        char* end = nullptr;
        double v = std::strtod(text, &end);
        if (*text == '\0' || *end != '\0')
            throw ParseError(std::string("invalid decimal literal `") + text + "`", 0);
        return new mexpr_tree{Mst::number(NumericLiteral::decimal(v, text))};
    });
}

mexpr_tree* mexpr_tree_unary(const char* op, const mexpr_tree* operand,
                             mexpr_error* err) {
    if (!op || !operand) {
        set_error(err, MEXPR_ERR_INVALID, "op or operand is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        if (!is_unary_op(op))
            throw ParseError(std::string("unknown unary operation `") + op + "`", 0);
        return new mexpr_tree{Mst::unary(op, operand->m)};
    });
}

mexpr_tree* mexpr_tree_binary(const char* op, const mexpr_tree* left,
                              const mexpr_tree* right, mexpr_error* err) {
    if (!op || !left || !right) {
        set_error(err, MEXPR_ERR_INVALID, "op or child is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        if (!is_binary_op(op))
            throw ParseError(std::string("unknown binary operation `") + op + "`", 0);
        return new mexpr_tree{Mst::binary(op, left->m, right->m)};
    });
}

int mexpr_tree_equal(const mexpr_tree* a, const mexpr_tree* b) {
    if (!a || !b)
        return a == b;
    return a->m == b->m ? 1 : 0;
}

char* mexpr_tree_to_sexpr(const mexpr_tree* t) {
    return t ? dup_string(to_sexpr(t->m)) : nullptr;
}

char* mexpr_tree_to_json(const mexpr_tree* t) {
    return t ? dup_string(to_json(t->m)) : nullptr;
}

char* mexpr_tree_pretty(const mexpr_tree* t) {
    return t ? dup_string(pretty_print(t->m)) : nullptr;
}

mexpr_tree* mexpr_diff(const mexpr_tree* t, const char* wrt, mexpr_error* err) {
    if (!t || !wrt) {
        set_error(err, MEXPR_ERR_INVALID, "tree or symbol is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_tree* {
        return new mexpr_tree{differentiate(t->m, Symbol(wrt))};
    });
}

mexpr_tree* mexpr_simplify(const mexpr_tree* t) {
    return t ? new mexpr_tree{simplify(t->m)} : nullptr;
}

char* mexpr_emit_text(const mexpr_tree* t, int fold, mexpr_error* err) {
    if (!t) {
        set_error(err, MEXPR_ERR_INVALID, "tree is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> char* {
        return dup_string(emit_portable_text(compile_real(t->m, fold != 0)));
    });
}

/* --- bindings ------------------------------------------------------------- */

mexpr_bindings* mexpr_bindings_new(mexpr_algebra algebra) {
    return new mexpr_bindings{algebra, {}, {}, {}};
}

void mexpr_bindings_free(mexpr_bindings* b) { delete b; }

int mexpr_bindings_set_real(mexpr_bindings* b, const char* name, double value,
                            mexpr_error* err) {
    if (!b || !name || b->algebra != MEXPR_ALGEBRA_REAL) {
        set_error(err, MEXPR_ERR_INVALID, "real binding on non-real bindings");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        b->real.set(Symbol(name), value);
        return MEXPR_OK;
    });
}

int mexpr_bindings_set_complex(mexpr_bindings* b, const char* name, double re,
                               double im, mexpr_error* err) {
    if (!b || !name || b->algebra != MEXPR_ALGEBRA_COMPLEX) {
        set_error(err, MEXPR_ERR_INVALID, "complex binding on non-complex bindings");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        b->cplx.set(Symbol(name), ComplexValue{re, im});
        return MEXPR_OK;
    });
}

int mexpr_bindings_set_int(mexpr_bindings* b, const char* name, int64_t value,
                           mexpr_error* err) {
    if (!b || !name || b->algebra != MEXPR_ALGEBRA_INT) {
        set_error(err, MEXPR_ERR_INVALID, "int binding on non-int bindings");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        b->ints.set(Symbol(name), value);
        return MEXPR_OK;
    });
}

/* --- compiled expressions -------------------------------------------------- */

mexpr_expr* mexpr_compile(const mexpr_tree* t, mexpr_algebra algebra,
                          mexpr_backend backend, int fold, mexpr_error* err) {
    if (!t) {
        set_error(err, MEXPR_ERR_INVALID, "tree is NULL");
        return nullptr;
    }
    return guarded(err, [&]() -> mexpr_expr* {
        if (backend == MEXPR_BACKEND_REAL) {
            if (algebra != MEXPR_ALGEBRA_REAL)
                throw CompileError(CompileErrorKind::NotRealField, "",
                                   algebra == MEXPR_ALGEBRA_COMPLEX ? "complex"
                                                                    : "int");
            auto prog = std::make_shared<RealProgram>(compile_real(t->m, fold != 0));
            return new mexpr_expr{
                algebra, Expression<double>([prog](const Bindings<double>& b) {
                    return run_real(*prog, b);
                })};
        }
        switch (algebra) {
        case MEXPR_ALGEBRA_REAL:
            return new mexpr_expr{algebra, make_backend(t->m, real_ctx(), backend)};
        case MEXPR_ALGEBRA_COMPLEX:
            return new mexpr_expr{algebra,
                                  make_backend(t->m, complex_field(), backend)};
        case MEXPR_ALGEBRA_INT:
            return new mexpr_expr{algebra,
                                  make_backend(t->m, integer_ring(), backend)};
        }
        throw std::invalid_argument("unknown algebra");
    });
}

void mexpr_expr_free(mexpr_expr* e) { delete e; }

int mexpr_eval_real(const mexpr_expr* e, const mexpr_bindings* b, double* out,
                    mexpr_error* err) {
    if (!e || !b || !out || e->algebra != MEXPR_ALGEBRA_REAL ||
        b->algebra != MEXPR_ALGEBRA_REAL) {
        set_error(err, MEXPR_ERR_INVALID, "expression/bindings are not real");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        *out = std::get<Expression<double>>(e->e).invoke(b->real);
        return MEXPR_OK;
    });
}

int mexpr_eval_complex(const mexpr_expr* e, const mexpr_bindings* b, double* out_re,
                       double* out_im, mexpr_error* err) {
    if (!e || !b || !out_re || !out_im || e->algebra != MEXPR_ALGEBRA_COMPLEX ||
        b->algebra != MEXPR_ALGEBRA_COMPLEX) {
        set_error(err, MEXPR_ERR_INVALID, "expression/bindings are not complex");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        ComplexValue v = std::get<Expression<ComplexValue>>(e->e).invoke(b->cplx);
        *out_re = v.re;
        *out_im = v.im;
        return MEXPR_OK;
    });
}

int mexpr_eval_int(const mexpr_expr* e, const mexpr_bindings* b, int64_t* out,
                   mexpr_error* err) {
    if (!e || !b || !out || e->algebra != MEXPR_ALGEBRA_INT ||
        b->algebra != MEXPR_ALGEBRA_INT) {
        set_error(err, MEXPR_ERR_INVALID, "expression/bindings are not integer");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        *out = std::get<Expression<std::int64_t>>(e->e).invoke(b->ints);
        return MEXPR_OK;
    });
}

/* --- benchmark ------------------------------------------------------------- */

int mexpr_bench(const mexpr_tree* t, const mexpr_bindings* b, uint64_t iterations,
                int warmup_batches, int measured_batches, const char* backends,
                mexpr_bench_row* rows, size_t rows_cap, size_t* rows_len,
                mexpr_error* err) {
    if (!t || !b || !rows || !rows_len || b->algebra != MEXPR_ALGEBRA_REAL ||
        iterations == 0 || measured_batches < 1 || warmup_batches < 0) {
        set_error(err, MEXPR_ERR_INVALID, "invalid benchmark arguments");
        return MEXPR_ERR_INVALID;
    }
    return guarded(err, [&]() -> int {
        std::vector<std::string> names;
        if (!backends) {
            names = {"interpret", "functional", "compiled", "real", "raw"};
        } else {
            std::stringstream ss{std::string(backends)};
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty())
                    names.push_back(item);
        }
        BenchReport report = run_benchmark(t->m, b->real, iterations, names,
                                           warmup_batches, measured_batches);
        *rows_len = 0;
        for (const BenchResult& r : report.results) {
            if (*rows_len >= rows_cap)
                break;
            mexpr_bench_row& row = rows[(*rows_len)++];
            std::snprintf(row.backend, sizeof(row.backend), "%s", r.backend.c_str());
            row.iterations = r.iterations;
            row.total_seconds = r.total_seconds;
            row.mean_ns = r.mean_ns;
            row.stddev_ns = r.stddev_ns;
            row.throughput_hz = r.throughput_hz;
            row.checksum = r.checksum;
        }
        return MEXPR_OK;
    });
}

} /* extern "C" */
