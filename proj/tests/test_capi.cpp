// Exercises the shared-library surface the way an external client would:
// everything through opaque handles and status codes, no C++ internals.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "mexpr/mexpr.h"

namespace {

struct TreePtr {
    mexpr_tree* p = nullptr;
    ~TreePtr() { mexpr_tree_free(p); }
    operator mexpr_tree*() const { return p; }
};

struct ExprPtr {
    mexpr_expr* p = nullptr;
    ~ExprPtr() { mexpr_expr_free(p); }
    operator mexpr_expr*() const { return p; }
};

struct BindPtr {
    mexpr_bindings* p = nullptr;
    ~BindPtr() { mexpr_bindings_free(p); }
    operator mexpr_bindings*() const { return p; }
};

std::string take_string(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    mexpr_string_free(s);
    return out;
}

} // namespace

TEST_CASE("version string is present") {
    const char* v = mexpr_version();
    REQUIRE(v != nullptr);
    CHECK(std::strlen(v) > 0);
}

TEST_CASE("parse and render") {
    mexpr_error err{};
    TreePtr t{mexpr_parse("2*x+2/x-16/sin(x)", &err)};
    REQUIRE(t.p != nullptr);
    CHECK(err.status == MEXPR_OK);
    CHECK(take_string(mexpr_tree_to_sexpr(t)) ==
          "(- (+ (* 2 x) (/ 2 x)) (/ 16 (sin x)))");
    CHECK(take_string(mexpr_tree_pretty(t)) == "2 * x + 2 / x - 16 / sin(x)");

    std::string json = take_string(mexpr_tree_to_json(t));
    TreePtr back{mexpr_tree_from_json(json.c_str(), &err)};
    REQUIRE(back.p != nullptr);
    CHECK(mexpr_tree_equal(t, back) == 1);
}

TEST_CASE("parse errors carry status, offset and message") {
    mexpr_error err{};
    TreePtr t{mexpr_parse("x +", &err)};
    CHECK(t.p == nullptr);
    CHECK(err.status == MEXPR_ERR_PARSE);
    CHECK(err.offset == 3);
    CHECK(std::strlen(err.message) > 0);

    mexpr_error jerr{};
    TreePtr j{mexpr_tree_from_json("{\"op\":\"frobnicate\",\"args\":[]}", &jerr)};
    CHECK(j.p == nullptr);
    CHECK(jerr.status == MEXPR_ERR_PARSE);
}

TEST_CASE("tree building mirrors parsing") {
    mexpr_error err{};
    TreePtr x{mexpr_tree_symbol("x", &err)};
    TreePtr two{mexpr_tree_int(2)};
    TreePtr sum{mexpr_tree_binary("+", x, two, &err)};
    REQUIRE(sum.p != nullptr);
    TreePtr parsed{mexpr_parse("x+2", &err)};
    CHECK(mexpr_tree_equal(sum, parsed) == 1);
    CHECK(mexpr_tree_equal(sum, x) == 0);

    TreePtr cl{mexpr_tree_clone(sum)};
    CHECK(mexpr_tree_equal(cl, sum) == 1);

    TreePtr dec{mexpr_tree_decimal("0.5", &err)};
    REQUIRE(dec.p != nullptr);
    CHECK(take_string(mexpr_tree_to_sexpr(dec)) == "0.5");

    TreePtr s{mexpr_tree_unary("sin", x, &err)};
    REQUIRE(s.p != nullptr);

    // invalid names surface as INVALID, malformed content as PARSE
    mexpr_error bad{};
    CHECK(mexpr_tree_symbol("2bad", &bad) == nullptr);
    CHECK(bad.status == MEXPR_ERR_INVALID);
    bad = {};
    CHECK(mexpr_tree_unary("sinh", x, &bad) == nullptr);
    CHECK(bad.status == MEXPR_ERR_PARSE);
    bad = {};
    CHECK(mexpr_tree_decimal("zz", &bad) == nullptr);
    CHECK(bad.status == MEXPR_ERR_PARSE);
}

TEST_CASE("evaluation across algebras and backends") {
    mexpr_error err{};
    TreePtr t{mexpr_parse("2*x+2/x-16/sin(x)", &err)};
    REQUIRE(t.p != nullptr);
    BindPtr b{mexpr_bindings_new(MEXPR_ALGEBRA_REAL)};
    REQUIRE(mexpr_bindings_set_real(b, "x", 1.0, &err) == MEXPR_OK);

    const double expected = 2.0 + 2.0 - 16.0 / std::sin(1.0);
    for (mexpr_backend backend :
         {MEXPR_BACKEND_INTERPRET, MEXPR_BACKEND_FUNCTIONAL, MEXPR_BACKEND_COMPILED,
          MEXPR_BACKEND_REAL}) {
        CAPTURE(static_cast<int>(backend));
        ExprPtr e{mexpr_compile(t, MEXPR_ALGEBRA_REAL, backend, 0, &err)};
        REQUIRE(e.p != nullptr);
        double out = 0.0;
        REQUIRE(mexpr_eval_real(e, b, &out, &err) == MEXPR_OK);
        CHECK(out == expected); // all backends agree bitwise
    }

    SUBCASE("complex") {
        TreePtr zc{mexpr_parse("i*i", &err)};
        ExprPtr e{mexpr_compile(zc, MEXPR_ALGEBRA_COMPLEX, MEXPR_BACKEND_COMPILED, 0,
                                &err)};
        REQUIRE(e.p != nullptr);
        BindPtr cb{mexpr_bindings_new(MEXPR_ALGEBRA_COMPLEX)};
        double re = 0, im = 0;
        REQUIRE(mexpr_eval_complex(e, cb, &re, &im, &err) == MEXPR_OK);
        CHECK(re == -1.0);
        CHECK(im == 0.0);
    }

    SUBCASE("integers") {
        TreePtr zi{mexpr_parse("x*y - 3", &err)};
        ExprPtr e{mexpr_compile(zi, MEXPR_ALGEBRA_INT, MEXPR_BACKEND_COMPILED, 0, &err)};
        REQUIRE(e.p != nullptr);
        BindPtr ib{mexpr_bindings_new(MEXPR_ALGEBRA_INT)};
        REQUIRE(mexpr_bindings_set_int(ib, "x", 6, &err) == MEXPR_OK);
        REQUIRE(mexpr_bindings_set_int(ib, "y", 7, &err) == MEXPR_OK);
        int64_t out = 0;
        REQUIRE(mexpr_eval_int(e, ib, &out, &err) == MEXPR_OK);
        CHECK(out == 39);
    }
}

TEST_CASE("error statuses from compilation and evaluation") {
    mexpr_error err{};
    TreePtr sinx{mexpr_parse("sin(x)", &err)};

    SUBCASE("unsupported operation is eager for compiled backends") {
        ExprPtr e{mexpr_compile(sinx, MEXPR_ALGEBRA_INT, MEXPR_BACKEND_COMPILED, 0,
                                &err)};
        CHECK(e.p == nullptr);
        CHECK(err.status == MEXPR_ERR_UNSUPPORTED_OP);
        CHECK(std::string(err.message).find("sin") != std::string::npos);
    }

    SUBCASE("unsupported operation is late for the interpreter") {
        ExprPtr e{mexpr_compile(sinx, MEXPR_ALGEBRA_INT, MEXPR_BACKEND_INTERPRET, 0,
                                &err)};
        REQUIRE(e.p != nullptr);
        BindPtr b{mexpr_bindings_new(MEXPR_ALGEBRA_INT)};
        REQUIRE(mexpr_bindings_set_int(b, "x", 1, &err) == MEXPR_OK);
        int64_t out = 0;
        CHECK(mexpr_eval_int(e, b, &out, &err) == MEXPR_ERR_UNSUPPORTED_OP);
    }

    SUBCASE("real backend requires the real algebra") {
        ExprPtr e{mexpr_compile(sinx, MEXPR_ALGEBRA_COMPLEX, MEXPR_BACKEND_REAL, 0,
                                &err)};
        CHECK(e.p == nullptr);
        CHECK(err.status == MEXPR_ERR_NOT_REAL);
    }

    SUBCASE("unbound symbol") {
        ExprPtr e{mexpr_compile(sinx, MEXPR_ALGEBRA_REAL, MEXPR_BACKEND_REAL, 0, &err)};
        REQUIRE(e.p != nullptr);
        BindPtr b{mexpr_bindings_new(MEXPR_ALGEBRA_REAL)};
        double out = 0;
        CHECK(mexpr_eval_real(e, b, &out, &err) == MEXPR_ERR_UNBOUND_SYMBOL);
        CHECK(std::string(err.message).find("x") != std::string::npos);
    }

    SUBCASE("integer overflow") {
        TreePtr t{mexpr_parse("x*x", &err)};
        ExprPtr e{mexpr_compile(t, MEXPR_ALGEBRA_INT, MEXPR_BACKEND_COMPILED, 0, &err)};
        REQUIRE(e.p != nullptr);
        BindPtr b{mexpr_bindings_new(MEXPR_ALGEBRA_INT)};
        REQUIRE(mexpr_bindings_set_int(b, "x", int64_t{1} << 32, &err) == MEXPR_OK);
        int64_t out = 0;
        CHECK(mexpr_eval_int(e, b, &out, &err) == MEXPR_ERR_OVERFLOW);
    }

    SUBCASE("evaluating with the wrong result type") {
        ExprPtr e{mexpr_compile(sinx, MEXPR_ALGEBRA_REAL, MEXPR_BACKEND_REAL, 0, &err)};
        REQUIRE(e.p != nullptr);
        BindPtr b{mexpr_bindings_new(MEXPR_ALGEBRA_REAL)};
        int64_t out = 0;
        CHECK(mexpr_eval_int(e, b, &out, &err) == MEXPR_ERR_INVALID);
    }
}

TEST_CASE("differentiation and simplification") {
    mexpr_error err{};
    TreePtr t{mexpr_parse("x^2", &err)};
    TreePtr d{mexpr_diff(t, "x", &err)};
    REQUIRE(d.p != nullptr);
    TreePtr s{mexpr_simplify(d)};
    CHECK(take_string(mexpr_tree_pretty(s)) == "2 * x");

    mexpr_error bad{};
    CHECK(mexpr_diff(t, "9x", &bad) == nullptr);
    CHECK(bad.status == MEXPR_ERR_INVALID);
}

TEST_CASE("portable text emission") {
    mexpr_error err{};
    TreePtr t{mexpr_parse("x+2", &err)};
    std::string text = take_string(mexpr_emit_text(t, 0, &err));
    CHECK(text ==
          "(func $executable (param $0 f64) (result f64)\n"
          "  (f64.add\n"
          "    (local.get $0)\n"
          "    (f64.const 2)\n"
          "  )\n"
          ")\n");

    TreePtr closed{mexpr_parse("1+2", &err)};
    std::string folded = take_string(mexpr_emit_text(closed, 1, &err));
    CHECK(folded.find("f64.const 3") != std::string::npos);
    CHECK(folded.find("f64.add") == std::string::npos);
}

TEST_CASE("benchmark entry point produces sane rows") {
    mexpr_error err{};
    TreePtr t{mexpr_parse("2*x+2/x-16/sin(x)", &err)};
    BindPtr b{mexpr_bindings_new(MEXPR_ALGEBRA_REAL)};
    REQUIRE(mexpr_bindings_set_real(b, "x", 1.0, &err) == MEXPR_OK);

    mexpr_bench_row rows[8];
    size_t n = 0;
    // tiny run: this checks plumbing, not performance
    REQUIRE(mexpr_bench(t, b, 1000, 1, 2, "interpret,real,raw", rows, 8, &n, &err) ==
            MEXPR_OK);
    REQUIRE(n == 3);
    CHECK(std::string(rows[0].backend) == "interpret");
    CHECK(std::string(rows[1].backend) == "real");
    CHECK(std::string(rows[2].backend) == "raw");
    for (size_t i = 0; i < n; ++i) {
        CHECK(rows[i].iterations == 1000);
        CHECK(rows[i].mean_ns > 0.0);
        CHECK(rows[i].throughput_hz > 0.0);
        // every backend computes the same sums
        CHECK(rows[i].checksum == rows[0].checksum);
    }

    // raw applies only to the built-in formula; otherwise it is dropped
    TreePtr other{mexpr_parse("x+1", &err)};
    REQUIRE(mexpr_bench(other, b, 100, 1, 1, "functional,raw", rows, 8, &n, &err) ==
            MEXPR_OK);
    REQUIRE(n == 1);
    CHECK(std::string(rows[0].backend) == "functional");

    mexpr_error bad{};
    CHECK(mexpr_bench(t, b, 100, 1, 1, "warp", rows, 8, &n, &bad) != MEXPR_OK);
}
