#include "mexpr/mst.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <variant>
#include <vector>

#include "mexpr/errors.hpp"

#include "json.hpp"

namespace mexpr {

namespace {

constexpr std::array<std::string_view, 10> kUnaryOps = {
    "neg", "sin", "cos", "tan", "asin", "acos", "atan", "exp", "ln", "sqrt"};

constexpr std::array<std::string_view, 5> kBinaryOps = {"+", "-", "*", "/", "pow"};

} // namespace

bool is_unary_op(std::string_view op) {
    return std::find(kUnaryOps.begin(), kUnaryOps.end(), op) != kUnaryOps.end();
}

bool is_binary_op(std::string_view op) {
    return std::find(kBinaryOps.begin(), kBinaryOps.end(), op) != kBinaryOps.end();
}

std::span<const std::string_view> unary_op_names() {
    return {kUnaryOps.data(), kUnaryOps.size()};
}

std::span<const std::string_view> binary_op_names() {
    return {kBinaryOps.data(), kBinaryOps.size()};
}

// --- tree node -------------------------------------------------------------

struct Mst::Node {
    struct Unary {
        std::string op;
        Mst operand;
    };
    struct Binary {
        std::string op;
        Mst left;
        Mst right;
    };
    std::variant<Symbol, NumericLiteral, Unary, Binary> v;
};

Mst Mst::symbol(Symbol s) {
    return Mst(std::make_shared<const Node>(Node{std::move(s)}));
}

Mst Mst::number(NumericLiteral lit) {
    return Mst(std::make_shared<const Node>(Node{std::move(lit)}));
}

Mst Mst::unary(std::string_view op, Mst operand) {
    if (!is_unary_op(op))
        throw std::invalid_argument("unknown unary operation: '" + std::string(op) + "'");
    return Mst(std::make_shared<const Node>(
        Node{Node::Unary{std::string(op), std::move(operand)}}));
}

Mst Mst::binary(std::string_view op, Mst left, Mst right) {
    if (!is_binary_op(op))
        throw std::invalid_argument("unknown binary operation: '" + std::string(op) + "'");
    return Mst(std::make_shared<const Node>(
        Node{Node::Binary{std::string(op), std::move(left), std::move(right)}}));
}

Mst::Kind Mst::kind() const { return static_cast<Kind>(node_->v.index()); }

const Symbol& Mst::symbol_value() const { return std::get<Symbol>(node_->v); }
const NumericLiteral& Mst::number_value() const {
    return std::get<NumericLiteral>(node_->v);
}

const std::string& Mst::op() const {
    if (auto* u = std::get_if<Node::Unary>(&node_->v))
        return u->op;
    return std::get<Node::Binary>(node_->v).op;
}

const Mst& Mst::operand() const { return std::get<Node::Unary>(node_->v).operand; }
const Mst& Mst::left() const { return std::get<Node::Binary>(node_->v).left; }
const Mst& Mst::right() const { return std::get<Node::Binary>(node_->v).right; }

std::size_t Mst::node_count() const {
    switch (kind()) {
    case Kind::Symbol:
    case Kind::Number:
        return 1;
    case Kind::Unary:
        return 1 + operand().node_count();
    case Kind::Binary:
        return 1 + left().node_count() + right().node_count();
    }
    return 0;
}

std::size_t Mst::depth() const {
    switch (kind()) {
    case Kind::Symbol:
    case Kind::Number:
        return 1;
    case Kind::Unary:
        return 1 + operand().depth();
    case Kind::Binary:
        return 1 + std::max(left().depth(), right().depth());
    }
    return 0;
}

bool Mst::contains_symbol() const {
    switch (kind()) {
    case Kind::Symbol:
        return true;
    case Kind::Number:
        return false;
    case Kind::Unary:
        return operand().contains_symbol();
    case Kind::Binary:
        return left().contains_symbol() || right().contains_symbol();
    }
    return false;
}

bool operator==(const Mst& a, const Mst& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Mst::Kind::Symbol:
        return a.symbol_value() == b.symbol_value();
    case Mst::Kind::Number:
        return a.number_value() == b.number_value();
    case Mst::Kind::Unary:
        return a.op() == b.op() && a.operand() == b.operand();
    case Mst::Kind::Binary:
        return a.op() == b.op() && a.left() == b.left() && a.right() == b.right();
    }
    return false;
}

const MstBuilder& mst_builder_context() {
    static const MstBuilder instance;
    return instance;
}

// --- s-expression ----------------------------------------------------------

std::string to_sexpr(const Mst& tree) {
    switch (tree.kind()) {
    case Mst::Kind::Symbol:
        return tree.symbol_value().name();
    case Mst::Kind::Number:
        return tree.number_value().to_string();
    case Mst::Kind::Unary:
        return "(" + tree.op() + " " + to_sexpr(tree.operand()) + ")";
    case Mst::Kind::Binary:
        return "(" + tree.op() + " " + to_sexpr(tree.left()) + " " +
               to_sexpr(tree.right()) + ")";
    }
    return {};
}

// --- JSON ------------------------------------------------------------------

namespace {

nlohmann::ordered_json tree_to_json(const Mst& tree) {
    switch (tree.kind()) {
    case Mst::Kind::Symbol:
        return {{"sym", tree.symbol_value().name()}};
    case Mst::Kind::Number: {
        const auto& lit = tree.number_value();
        if (lit.is_integer())
            return {{"num", {{"int", lit.int_value()}}}};
        return {{"num", {{"dec", lit.to_string()}}}};
    }
    case Mst::Kind::Unary:
        return {{"op", tree.op()}, {"args", {tree_to_json(tree.operand())}}};
    case Mst::Kind::Binary:
        return {{"op", tree.op()},
                {"args", {tree_to_json(tree.left()), tree_to_json(tree.right())}}};
    }
    return {};
}

Mst tree_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError("expected a JSON object node", 0);
    if (j.contains("sym")) {
        if (!j["sym"].is_string() || !Symbol::valid_name(j["sym"].get<std::string>()))
            throw ParseError("invalid symbol name", 0);
        return Mst::symbol(Symbol(j["sym"].get<std::string>()));
    }
    if (j.contains("num")) {
        const auto& n = j["num"];
        if (n.is_object() && n.contains("int") && n["int"].is_number_integer())
            return Mst::integer(n["int"].get<std::int64_t>());
        if (n.is_object() && n.contains("dec") && n["dec"].is_string()) {
            std::string text = n["dec"].get<std::string>();
            char* end = nullptr;
            double v = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size() || text.empty())
                throw ParseError("invalid decimal literal `" + text + "`", 0);
            return Mst::number(NumericLiteral::decimal(v, std::move(text)));
        }
        throw ParseError("invalid numeric literal node", 0);
    }
    if (j.contains("op")) {
        if (!j["op"].is_string() || !j.contains("args") || !j["args"].is_array())
            throw ParseError("invalid operation node", 0);
        std::string op = j["op"].get<std::string>();
        const auto& args = j["args"];
        if (args.size() == 1 && is_unary_op(op))
            return Mst::unary(op, tree_from_json(args[0]));
        if (args.size() == 2 && is_binary_op(op))
            return Mst::binary(op, tree_from_json(args[0]), tree_from_json(args[1]));
        throw ParseError("unknown operation `" + op + "` with arity " +
                             std::to_string(args.size()),
                         0);
    }
    throw ParseError("node has none of sym/num/op", 0);
}

} // namespace

std::string to_json(const Mst& tree) { return tree_to_json(tree).dump(); }

Mst from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    return tree_from_json(j);
}

// --- pretty printing -------------------------------------------------------

namespace {

// Precedence, loosest to tightest: additive < multiplicative < unary minus
// < power < atoms and calls.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Mst& t) {
    switch (t.kind()) {
    case Mst::Kind::Symbol:
        return kPrecAtom;
    case Mst::Kind::Number:
        // a negative literal prints with a leading minus, so it binds like one
        if (t.number_value().is_integer() && t.number_value().int_value() < 0)
            return kPrecNeg;
        return kPrecAtom;
    case Mst::Kind::Unary:
        return t.op() == "neg" ? kPrecNeg : kPrecAtom;
    case Mst::Kind::Binary: {
        const std::string& op = t.op();
        if (op == "+" || op == "-")
            return kPrecAdd;
        if (op == "*" || op == "/")
            return kPrecMul;
        return kPrecPow;
    }
    }
    return kPrecAtom;
}

std::string render(const Mst& t);

std::string child(const Mst& c, int min_prec) {
    std::string s = render(c);
    if (precedence(c) < min_prec)
        return "(" + s + ")";
    return s;
}

std::string render(const Mst& t) {
    switch (t.kind()) {
    case Mst::Kind::Symbol:
        return t.symbol_value().name();
    case Mst::Kind::Number:
        return t.number_value().to_string();
    case Mst::Kind::Unary:
        if (t.op() == "neg")
            return "-" + child(t.operand(), kPrecNeg);
        return t.op() + "(" + render(t.operand()) + ")";
    case Mst::Kind::Binary: {
        const std::string& op = t.op();
        if (op == "pow") {
            // grammar: power := atom '^' unary, right-associative
            return child(t.left(), kPrecAtom) + " ^ " + child(t.right(), kPrecNeg);
        }
        int prec = precedence(t);
        // left-associative: same-precedence right children keep their parens
        return child(t.left(), prec) + " " + op + " " + child(t.right(), prec + 1);
    }
    }
    return {};
}

} // namespace

std::string pretty_print(const Mst& tree) { return render(tree); }

} // namespace mexpr
