#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "mexpr/eval.hpp"
#include "mexpr/parser.hpp"
#include "support/random_trees.hpp"

using namespace mexpr;
using mexpr::testing::TreeGenOptions;
using mexpr::testing::gen_tree;

TEST_CASE("precedence and associativity") {
    CHECK(to_sexpr(parse("2*x+2/x-16/sin(x)")) ==
          "(- (+ (* 2 x) (/ 2 x)) (/ 16 (sin x)))");
    CHECK(to_sexpr(parse("1+2*3")) == "(+ 1 (* 2 3))");
    CHECK(to_sexpr(parse("1-2-3")) == "(- (- 1 2) 3)");
    CHECK(to_sexpr(parse("8/4/2")) == "(/ (/ 8 4) 2)");
    // ^ is right-associative: 2^3^2 = 2^(3^2) = 512
    CHECK(to_sexpr(parse("2^3^2")) == "(pow 2 (pow 3 2))");
    CHECK(interpret(parse("2^3^2"), real_field(), {}) == 512.0);
    // ^ binds tighter than unary minus
    CHECK(to_sexpr(parse("-x^2")) == "(neg (pow x 2))");
    CHECK(to_sexpr(parse("(-x)^2")) == "(pow (neg x) 2)");
    CHECK(to_sexpr(parse("-x*y")) == "(* (neg x) y)");
    CHECK(to_sexpr(parse("2 - -3")) == "(- 2 (neg 3))");
    CHECK(to_sexpr(parse("--x")) == "(neg (neg x))");
}

TEST_CASE("function calls") {
    CHECK(to_sexpr(parse("sin(x)")) == "(sin x)");
    CHECK(to_sexpr(parse("sqrt(x + 1)")) == "(sqrt (+ x 1))");
    CHECK(to_sexpr(parse("neg(x)")) == "(neg x)");
    CHECK(to_sexpr(parse("ln(exp(x))")) == "(ln (exp x))");
    // an identifier without parentheses is a symbol even if it names a function
    CHECK(to_sexpr(parse("sin + 1")) == "(+ sin 1)");
}

TEST_CASE("numeric literal classification") {
    CHECK(parse("42").number_value().is_integer());
    CHECK(parse("42").number_value().int_value() == 42);
    CHECK_FALSE(parse("42.0").number_value().is_integer());
    CHECK(parse("42.0").number_value().to_string() == "42.0");
    CHECK_FALSE(parse("1e3").number_value().is_integer());
    CHECK(parse("1e3").number_value().as_double() == 1000.0);
    CHECK_FALSE(parse("2.5e-1").number_value().is_integer());
    CHECK(parse("2.5e-1").number_value().as_double() == 0.25);
    // int64 range boundary: max fits, one past falls back to decimal
    CHECK(parse("9223372036854775807").number_value().is_integer());
    CHECK_FALSE(parse("9223372036854775808").number_value().is_integer());
}

TEST_CASE("whitespace is insignificant") {
    CHECK(parse("  2 * x  +\t2 / x ") == parse("2*x+2/x"));
    CHECK(parse("sin ( x )") == parse("sin(x)"));
}

TEST_CASE("malformed input reports offset and expectations") {
    auto expect_error = [](std::string_view src, std::size_t offset) {
        try {
            parse(src);
            FAIL("expected ParseError for: ", src);
        } catch (const ParseError& e) {
            CHECK(e.offset() == offset);
            CHECK_FALSE(e.expected().empty());
        }
    };
    expect_error("", 0);
    expect_error("x+", 2);
    expect_error("(x+1", 4);
    expect_error("*x", 0);
    expect_error("sin()", 4);
    expect_error("sin(x", 5);
    expect_error("sin(x 3)", 6);
    expect_error("x+1)", 3);
    expect_error("x $ y", 2);
    // no implicit multiplication
    expect_error("2x", 1);
    expect_error("2(x+1)", 1);
    // no leading-dot decimals
    expect_error(".5", 0);
    // unknown function name; binary ops are not callable by name
    for (std::string_view bad : {"sinh(x)", "pow(x)"}) {
        try {
            parse(bad);
            FAIL("expected ParseError for: ", bad);
        } catch (const ParseError& e) {
            CHECK(e.message().find("unknown function") != std::string::npos);
        }
    }
}

TEST_CASE("exponent marker is consumed only when digits follow") {
    CHECK_FALSE(parse("2e3").number_value().is_integer());
    CHECK(parse("2e+3").number_value().as_double() == 2000.0);
    CHECK(parse("2e+3").number_value().to_string() == "2e+3");
    // '2e' backtracks to integer 2 followed by symbol e -- which is then
    // trailing input, since there is no implicit multiplication
    CHECK_THROWS_AS(parse("2e"), ParseError);
    // '2E-x' likewise backtracks and then fails on the dangling operator
    CHECK_THROWS_AS(parse("2E-"), ParseError);
    CHECK(to_sexpr(parse("2E-1")) == "2E-1");
}

TEST_CASE("pretty print round-trips structurally") {
    std::mt19937_64 rng(77);
    TreeGenOptions opts;
    opts.max_depth = 7;
    opts.parser_producible = true;
    for (int i = 0; i < 1000; ++i) {
        Mst t = gen_tree(rng, opts);
        std::string text = pretty_print(t);
        CAPTURE(text);
        Mst back = parse(text);
        CHECK(back == t);
    }
}

TEST_CASE("parse then print then parse is stable") {
    for (std::string_view src :
         {"2*x+2/x-16/sin(x)", "-x^2", "2^3^2", "x/(y*z)", "sqrt(x)^2",
          "x^(y+1) - ln(x)"}) {
        Mst t = parse(src);
        CHECK(parse(pretty_print(t)) == t);
    }
}

TEST_CASE("random byte fuzz never crashes") {
    std::mt19937_64 rng(1234);
    const std::string alphabet = "xyz0123456789+-*/^(). esinconqrtapw_";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 24);
    int parsed = 0;
    for (int i = 0; i < 100000; ++i) {
        std::string s;
        int n = len(rng);
        for (int k = 0; k < n; ++k)
            s.push_back(alphabet[pick(rng)]);
        try {
            Mst t = parse(s);
            ++parsed;
            // anything accepted must round-trip
            CHECK(parse(pretty_print(t)) == t);
        } catch (const ParseError&) {
            // rejection is fine; crashing or looping is not
        }
    }
    CHECK(parsed > 0); // the corpus does hit valid expressions
}
