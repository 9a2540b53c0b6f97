/* C API for the mexpr expression engine.
 *
 * All objects are opaque handles; every fallible call reports through a
 * caller-supplied mexpr_error and returns NULL (for constructors) or a
 * nonzero status (for int-returning calls) on failure. Strings returned as
 * char* are library-allocated and must be released with mexpr_string_free.
 */
#ifndef MEXPR_H
#define MEXPR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef MEXPR_API
#define MEXPR_API __attribute__((visibility("default")))
#endif

typedef struct mexpr_tree mexpr_tree;
typedef struct mexpr_expr mexpr_expr;
typedef struct mexpr_bindings mexpr_bindings;

typedef enum mexpr_status {
    MEXPR_OK = 0,
    MEXPR_ERR_PARSE = 1,
    MEXPR_ERR_UNSUPPORTED_OP = 2,
    MEXPR_ERR_UNBOUND_SYMBOL = 3,
    MEXPR_ERR_OVERFLOW = 4,
    MEXPR_ERR_NOT_REAL = 5,
    MEXPR_ERR_INVALID = 6
} mexpr_status;

typedef enum mexpr_algebra {
    MEXPR_ALGEBRA_REAL = 0,    /* IEEE-754 double extended field */
    MEXPR_ALGEBRA_COMPLEX = 1, /* complex field, constant i */
    MEXPR_ALGEBRA_INT = 2      /* checked signed 64-bit ring */
} mexpr_algebra;

typedef enum mexpr_backend {
    MEXPR_BACKEND_INTERPRET = 0,  /* recursive tree walk, late binding */
    MEXPR_BACKEND_FUNCTIONAL = 1, /* closure tree, eager dispatch */
    MEXPR_BACKEND_COMPILED = 2,   /* generic stack program + constants pool */
    MEXPR_BACKEND_REAL = 3        /* specialized f64 opcode program */
} mexpr_backend;

typedef struct mexpr_error {
    int status;    /* mexpr_status */
    size_t offset; /* byte offset, parse errors only */
    char message[240];
} mexpr_error;

/* One benchmark table row. */
typedef struct mexpr_bench_row {
    char backend[16];
    uint64_t iterations;
    double total_seconds;
    double mean_ns;
    double stddev_ns;
    double throughput_hz;
    double checksum;
} mexpr_bench_row;

MEXPR_API const char* mexpr_version(void);
MEXPR_API void mexpr_string_free(char* s);

/* --- trees --------------------------------------------------------------- */

MEXPR_API mexpr_tree* mexpr_parse(const char* source, mexpr_error* err);
MEXPR_API mexpr_tree* mexpr_tree_from_json(const char* json, mexpr_error* err);
MEXPR_API mexpr_tree* mexpr_tree_clone(const mexpr_tree* t);
MEXPR_API void mexpr_tree_free(mexpr_tree* t);

/* Node constructors; child trees are borrowed (copied), not consumed. */
MEXPR_API mexpr_tree* mexpr_tree_symbol(const char* name, mexpr_error* err);
MEXPR_API mexpr_tree* mexpr_tree_int(int64_t value);
MEXPR_API mexpr_tree* mexpr_tree_decimal(const char* text, mexpr_error* err);
MEXPR_API mexpr_tree* mexpr_tree_unary(const char* op, const mexpr_tree* operand,
                                       mexpr_error* err);
MEXPR_API mexpr_tree* mexpr_tree_binary(const char* op, const mexpr_tree* left,
                                        const mexpr_tree* right, mexpr_error* err);

MEXPR_API int mexpr_tree_equal(const mexpr_tree* a, const mexpr_tree* b);

MEXPR_API char* mexpr_tree_to_sexpr(const mexpr_tree* t);
MEXPR_API char* mexpr_tree_to_json(const mexpr_tree* t);
MEXPR_API char* mexpr_tree_pretty(const mexpr_tree* t);

/* Symbolic differentiation and simplification. */
MEXPR_API mexpr_tree* mexpr_diff(const mexpr_tree* t, const char* wrt,
                                 mexpr_error* err);
MEXPR_API mexpr_tree* mexpr_simplify(const mexpr_tree* t);

/* Portable WAT-like text of the specialized f64 program. */
MEXPR_API char* mexpr_emit_text(const mexpr_tree* t, int fold, mexpr_error* err);

/* --- bindings ------------------------------------------------------------ */

MEXPR_API mexpr_bindings* mexpr_bindings_new(mexpr_algebra algebra);
MEXPR_API void mexpr_bindings_free(mexpr_bindings* b);
MEXPR_API int mexpr_bindings_set_real(mexpr_bindings* b, const char* name,
                                      double value, mexpr_error* err);
MEXPR_API int mexpr_bindings_set_complex(mexpr_bindings* b, const char* name,
                                         double re, double im, mexpr_error* err);
MEXPR_API int mexpr_bindings_set_int(mexpr_bindings* b, const char* name,
                                     int64_t value, mexpr_error* err);

/* --- compiled expressions ------------------------------------------------ */

/* Backend INTERPRET never fails here (all binding stays late); the other
 * backends fail eagerly on operations the algebra does not support. Backend
 * REAL requires MEXPR_ALGEBRA_REAL. `fold` enables constant folding and only
 * applies to the REAL backend. */
MEXPR_API mexpr_expr* mexpr_compile(const mexpr_tree* t, mexpr_algebra algebra,
                                    mexpr_backend backend, int fold,
                                    mexpr_error* err);
MEXPR_API void mexpr_expr_free(mexpr_expr* e);

MEXPR_API int mexpr_eval_real(const mexpr_expr* e, const mexpr_bindings* b,
                              double* out, mexpr_error* err);
MEXPR_API int mexpr_eval_complex(const mexpr_expr* e, const mexpr_bindings* b,
                                 double* out_re, double* out_im, mexpr_error* err);
MEXPR_API int mexpr_eval_int(const mexpr_expr* e, const mexpr_bindings* b,
                             int64_t* out, mexpr_error* err);

/* --- benchmark harness --------------------------------------------------- */

/* `backends` is a comma-separated list drawn from
 * interpret,functional,compiled,real,raw; NULL means all of them. Real
 * algebra only. Returns the number of rows written to `rows` via *rows_len. */
MEXPR_API int mexpr_bench(const mexpr_tree* t, const mexpr_bindings* b,
                          uint64_t iterations, int warmup_batches,
                          int measured_batches, const char* backends,
                          mexpr_bench_row* rows, size_t rows_cap, size_t* rows_len,
                          mexpr_error* err);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MEXPR_H */
