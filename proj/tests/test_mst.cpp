#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "mexpr/mst.hpp"
#include "mexpr/errors.hpp"
#include "mexpr/eval.hpp"
#include "support/random_trees.hpp"

using namespace mexpr;
using mexpr::testing::TreeGenOptions;
using mexpr::testing::gen_tree;

TEST_CASE("operation registry") {
    CHECK(unary_op_names().size() == 10);
    CHECK(binary_op_names().size() == 5);
    for (auto op : {"neg", "sin", "cos", "tan", "asin", "acos", "atan", "exp", "ln",
                    "sqrt"})
        CHECK(is_unary_op(op));
    for (auto op : {"+", "-", "*", "/", "pow"})
        CHECK(is_binary_op(op));
    CHECK_FALSE(is_unary_op("sinh"));
    CHECK_FALSE(is_binary_op("%"));
    CHECK_FALSE(is_binary_op("^")); // surface syntax only; the tree stores "pow"
}

TEST_CASE("construction and accessors") {
    Mst x = Mst::symbol("x");
    CHECK(x.kind() == Mst::Kind::Symbol);
    CHECK(x.symbol_value().name() == "x");

    Mst two = Mst::integer(2);
    CHECK(two.kind() == Mst::Kind::Number);
    CHECK(two.number_value().is_integer());
    CHECK(two.number_value().int_value() == 2);

    Mst sum = Mst::binary("+", x, two);
    CHECK(sum.kind() == Mst::Kind::Binary);
    CHECK(sum.op() == "+");
    CHECK(sum.left() == x);
    CHECK(sum.right() == two);

    Mst s = Mst::unary("sin", x);
    CHECK(s.kind() == Mst::Kind::Unary);
    CHECK(s.operand() == x);

    CHECK(sum.node_count() == 3);
    CHECK(sum.depth() == 2);
    CHECK(sum.contains_symbol());
    CHECK_FALSE(two.contains_symbol());
}

TEST_CASE("unknown operations cannot be constructed") {
    CHECK_THROWS_AS(Mst::unary("sinh", Mst::symbol("x")), std::invalid_argument);
    CHECK_THROWS_AS(Mst::binary("%", Mst::integer(1), Mst::integer(2)),
                    std::invalid_argument);
    // binary names are not unary names and vice versa
    CHECK_THROWS_AS(Mst::unary("+", Mst::symbol("x")), std::invalid_argument);
    CHECK_THROWS_AS(Mst::binary("sin", Mst::symbol("x"), Mst::symbol("y")),
                    std::invalid_argument);
}

TEST_CASE("structural equality") {
    Mst a = Mst::binary("+", Mst::symbol("x"), Mst::integer(2));
    Mst b = Mst::binary("+", Mst::symbol("x"), Mst::integer(2));
    CHECK(a == b);
    CHECK(a != Mst::binary("+", Mst::integer(2), Mst::symbol("x")));
    // integer 2 and decimal "2.0" are distinct literals
    CHECK(Mst::integer(2) != Mst::number(NumericLiteral::decimal(2.0, "2.0")));
    // decimals compare by source text, not value
    CHECK(Mst::number(NumericLiteral::decimal(0.5, "0.5")) !=
          Mst::number(NumericLiteral::decimal(0.5, ".5")));
    CHECK(Mst::number(NumericLiteral::decimal(0.5, "0.5")) ==
          Mst::number(NumericLiteral::decimal(0.5, "0.5")));
}

TEST_CASE("builder context constructs trees instead of computing") {
    const MstBuilder& b = mst_builder_context();
    Mst x = Mst::symbol("x");

    CHECK(b.add(x, b.one()) == Mst::binary("+", x, Mst::integer(1)));
    CHECK(b.negate(x) == Mst::unary("neg", x));
    CHECK(b.zero() == Mst::integer(0));
    CHECK(b.scale(x, NumericLiteral::integer(3)) ==
          Mst::binary("*", Mst::integer(3), x));
    CHECK(b.divide(b.sin(x), b.cos(x)) ==
          Mst::binary("/", Mst::unary("sin", x), Mst::unary("cos", x)));
    CHECK(b.pow(x, b.number(NumericLiteral::decimal(0.5, "0.5"))) ==
          Mst::binary("pow", x, Mst::number(NumericLiteral::decimal(0.5, "0.5"))));
    // constants stay symbolic until interpreted against a target context
    CHECK(*b.constant(Symbol("pi")) == Mst::symbol("pi"));
    CHECK(b.tier() == Tier::ExtendedField);
}

TEST_CASE("builder operations agree with interpreting the built tree") {
    // building a tree through the context, then interpreting it, must equal
    // computing directly in the target context
    const MstBuilder& b = mst_builder_context();
    const auto& real = real_field();
    Mst expr = b.subtract(b.multiply(b.number(NumericLiteral::integer(2)),
                                     Mst::symbol("x")),
                          b.sqrt(Mst::symbol("x")));
    Bindings<double> bind{{"x", 2.25}};
    double via_tree = interpret(expr, real, bind);
    double direct = real.subtract(real.multiply(2.0, 2.25), real.sqrt(2.25));
    CHECK(via_tree == direct);
}

TEST_CASE("s-expression rendering") {
    Mst t = Mst::binary(
        "-",
        Mst::binary("+", Mst::binary("*", Mst::integer(2), Mst::symbol("x")),
                    Mst::binary("/", Mst::integer(2), Mst::symbol("x"))),
        Mst::binary("/", Mst::integer(16), Mst::unary("sin", Mst::symbol("x"))));
    CHECK(to_sexpr(t) == "(- (+ (* 2 x) (/ 2 x)) (/ 16 (sin x)))");
    CHECK(to_sexpr(Mst::symbol("x")) == "x");
    CHECK(to_sexpr(Mst::integer(-3)) == "-3");
    CHECK(to_sexpr(Mst::number(NumericLiteral::decimal(0.5, "0.5"))) == "0.5");
    CHECK(to_sexpr(Mst::unary("neg", Mst::symbol("x"))) == "(neg x)");
}

TEST_CASE("json serialization schema") {
    CHECK(to_json(Mst::symbol("x")) == R"({"sym":"x"})");
    CHECK(to_json(Mst::integer(7)) == R"({"num":{"int":7}})");
    CHECK(to_json(Mst::number(NumericLiteral::decimal(0.5, "0.5"))) ==
          R"({"num":{"dec":"0.5"}})");
    CHECK(to_json(Mst::binary("+", Mst::symbol("x"), Mst::integer(2))) ==
          R"({"op":"+","args":[{"sym":"x"},{"num":{"int":2}}]})");
    CHECK(to_json(Mst::unary("sin", Mst::symbol("x"))) ==
          R"({"op":"sin","args":[{"sym":"x"}]})");
}

TEST_CASE("json round-trip on random trees") {
    std::mt19937_64 rng(101);
    TreeGenOptions opts;
    opts.max_depth = 8;
    opts.parser_producible = false; // negative literals must survive JSON
    for (int i = 0; i < 1000; ++i) {
        Mst t = gen_tree(rng, opts);
        Mst back = from_json(to_json(t));
        CHECK(t == back);
        // serialized form is canonical: a second round agrees byte for byte
        CHECK(to_json(t) == to_json(back));
    }
}

TEST_CASE("json rejects malformed input") {
    CHECK_THROWS_AS(from_json("not json"), ParseError);
    CHECK_THROWS_AS(from_json("[1,2]"), ParseError);
    CHECK_THROWS_AS(from_json(R"({"sym":"2bad"})"), ParseError);
    CHECK_THROWS_AS(from_json(R"({"op":"sinh","args":[{"sym":"x"}]})"), ParseError);
    // arity mismatch: "+" with one argument
    CHECK_THROWS_AS(from_json(R"({"op":"+","args":[{"sym":"x"}]})"), ParseError);
    CHECK_THROWS_AS(from_json(R"({"num":{"dec":"zz"}})"), ParseError);
    CHECK_THROWS_AS(from_json(R"({"other":1})"), ParseError);
    try {
        from_json(R"({"op":"sinh","args":[{"sym":"x"}]})");
    } catch (const ParseError& e) {
        CHECK(e.message().find("sinh") != std::string::npos);
    }
}

TEST_CASE("pretty printing inserts only required parentheses") {
    auto x = Mst::symbol("x");
    auto y = Mst::symbol("y");
    CHECK(pretty_print(Mst::binary("+", x, Mst::integer(2))) == "x + 2");
    CHECK(pretty_print(Mst::binary("*", Mst::binary("+", x, y), Mst::integer(2))) ==
          "(x + y) * 2");
    CHECK(pretty_print(Mst::binary("+", Mst::binary("*", x, y), Mst::integer(2))) ==
          "x * y + 2");
    // left-associative chains need parens only on the right
    CHECK(pretty_print(Mst::binary("-", Mst::binary("-", x, y), x)) == "x - y - x");
    CHECK(pretty_print(Mst::binary("-", x, Mst::binary("-", y, x))) == "x - (y - x)");
    // pow is right-associative and binds tighter than unary minus
    CHECK(pretty_print(Mst::binary("pow", x, Mst::binary("pow", y, x))) == "x ^ y ^ x");
    CHECK(pretty_print(Mst::binary("pow", Mst::binary("pow", x, y), x)) ==
          "(x ^ y) ^ x");
    CHECK(pretty_print(Mst::unary("neg", Mst::binary("pow", x, Mst::integer(2)))) ==
          "-x ^ 2");
    CHECK(pretty_print(Mst::binary("pow", Mst::unary("neg", x), Mst::integer(2))) ==
          "(-x) ^ 2");
    CHECK(pretty_print(Mst::unary("sin", Mst::binary("+", x, y))) == "sin(x + y)");
    CHECK(pretty_print(Mst::binary("/", Mst::integer(16), Mst::unary("sin", x))) ==
          "16 / sin(x)");
}

TEST_CASE("node sharing keeps copies cheap") {
    Mst x = Mst::symbol("x");
    Mst t = x;
    for (int i = 0; i < 16; ++i)
        t = Mst::binary("+", t, t); // shared subtrees: count grows, memory does not
    CHECK(t.depth() == 17);
    CHECK(t.node_count() == (std::size_t{1} << 17) - 1);
    Mst copy = t;
    CHECK(copy == t);
}
