#include "mexpr/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

namespace mexpr {

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Mst run() {
        skip_ws();
        if (at_end())
            throw ParseError("empty input", 0, {"expression"});
        Mst result = expression();
        skip_ws();
        if (!at_end())
            throw ParseError("unexpected trailing input", pos_, {"end of input"});
        return result;
    }

private:
    // expression := term (('+' | '-') term)*
    Mst expression() {
        Mst lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                lhs = Mst::binary("+", std::move(lhs), term());
            else if (accept('-'))
                lhs = Mst::binary("-", std::move(lhs), term());
            else
                return lhs;
        }
    }

    // term := unary (('*' | '/') unary)*
    Mst term() {
        Mst lhs = unary();
        for (;;) {
            skip_ws();
            if (accept('*'))
                lhs = Mst::binary("*", std::move(lhs), unary());
            else if (accept('/'))
                lhs = Mst::binary("/", std::move(lhs), unary());
            else
                return lhs;
        }
    }

    // unary := '-' unary | power
    Mst unary() {
        skip_ws();
        if (accept('-'))
            return Mst::unary("neg", unary());
        return power();
    }

    // power := atom ('^' unary)?   -- right-associative via the unary recursion
    Mst power() {
        Mst base = atom();
        skip_ws();
        if (accept('^'))
            return Mst::binary("pow", std::move(base), unary());
        return base;
    }

    // atom := number | ident | ident '(' expression ')' | '(' expression ')'
    Mst atom() {
        skip_ws();
        if (at_end())
            throw ParseError("unexpected end of input", pos_,
                             {"number", "identifier", "("});
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)))
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        if (accept('(')) {
            Mst inner = expression();
            skip_ws();
            if (!accept(')'))
                throw ParseError("unbalanced parentheses", pos_, {")"});
            return inner;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_,
                         {"number", "identifier", "(", "-"});
    }

    Mst number() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        bool is_decimal = false;
        if (!at_end() && peek() == '.') {
            is_decimal = true;
            ++pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("expected digits after decimal point", pos_, {"digit"});
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
        }
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-'))
                ++pos_;
            if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                is_decimal = true;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                    ++pos_;
            } else {
                // not an exponent, e.g. `2e` where `e` is the next token; back off
                pos_ = mark;
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        if (!is_decimal) {
            errno = 0;
            char* end = nullptr;
            long long v = std::strtoll(text.c_str(), &end, 10);
            if (errno == 0 && end == text.c_str() + text.size())
                return Mst::integer(v);
            // out of 64-bit range: fall through to a decimal literal
        }
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size())
            throw ParseError("malformed numeric literal `" + text + "`", start,
                             {"number"});
        return Mst::number(NumericLiteral::decimal(v, std::move(text)));
    }

    Mst identifier() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                             peek() == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        skip_ws();
        if (accept('(')) {
            if (!is_unary_op(name))
                throw ParseError("unknown function `" + name + "`", start,
                                 {"sin", "cos", "tan", "asin", "acos", "atan", "exp",
                                  "ln", "sqrt"});
            Mst arg = expression();
            skip_ws();
            if (!accept(')'))
                throw ParseError("unbalanced parentheses in call", pos_, {")"});
            return Mst::unary(name, std::move(arg));
        }
        return Mst::symbol(Symbol(std::move(name)));
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    bool accept(char c) {
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

Mst parse(std::string_view input) { return Parser(input).run(); }

} // namespace mexpr
