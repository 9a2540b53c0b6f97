#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mexpr {

/// Interned identifier used for variables and algebra constants.
/// Valid names match [A-Za-z_][A-Za-z0-9_]*; equality is by name.
class Symbol {
public:
    explicit Symbol(std::string name)
        : name_(std::move(name)), hash_(std::hash<std::string>{}(name_)) {
        if (!valid_name(name_))
            throw std::invalid_argument("invalid symbol name: '" + name_ + "'");
    }

    const std::string& name() const { return name_; }
    std::size_t hash() const { return hash_; }

    friend bool operator==(const Symbol& a, const Symbol& b) {
        if (a.hash_ != b.hash_ || a.name_.size() != b.name_.size())
            return false;
        // names are a few characters; an inline byte loop beats a library
        // memcmp call on the lookup hot path
        const char* pa = a.name_.data();
        const char* pb = b.name_.data();
        for (std::size_t i = 0, n = a.name_.size(); i < n; ++i)
            if (pa[i] != pb[i])
                return false;
        return true;
    }
    friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }
    friend bool operator<(const Symbol& a, const Symbol& b) { return a.name_ < b.name_; }

    static bool valid_name(std::string_view s) {
        if (s.empty())
            return false;
        auto head = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
        auto tail = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
        if (!head(static_cast<unsigned char>(s[0])))
            return false;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!tail(static_cast<unsigned char>(s[i])))
                return false;
        return true;
    }

private:
    std::string name_;
    std::size_t hash_; // precomputed; symbol lookups are on hot paths
};

struct SymbolHash {
    std::size_t operator()(const Symbol& s) const { return s.hash(); }
};

/// Numeric literal: either an exact signed 64-bit integer or a decimal
/// that keeps its original source text so printing round-trips losslessly.
class NumericLiteral {
public:
    static NumericLiteral integer(std::int64_t v) { return NumericLiteral(v); }

    static NumericLiteral decimal(double value, std::string text) {
        NumericLiteral lit(0);
        lit.is_integer_ = false;
        lit.dec_value_ = value;
        lit.text_ = std::move(text);
        return lit;
    }

    bool is_integer() const { return is_integer_; }
    std::int64_t int_value() const { return int_value_; }

    double as_double() const {
        return is_integer_ ? static_cast<double>(int_value_) : dec_value_;
    }

    /// Source form: decimal digits for integers, the stored text for decimals.
    std::string to_string() const {
        return is_integer_ ? std::to_string(int_value_) : text_;
    }

    friend bool operator==(const NumericLiteral& a, const NumericLiteral& b) {
        if (a.is_integer_ != b.is_integer_)
            return false;
        return a.is_integer_ ? a.int_value_ == b.int_value_ : a.text_ == b.text_;
    }
    friend bool operator!=(const NumericLiteral& a, const NumericLiteral& b) {
        return !(a == b);
    }

private:
    explicit NumericLiteral(std::int64_t v) : int_value_(v) {}

    bool is_integer_ = true;
    std::int64_t int_value_ = 0;
    double dec_value_ = 0.0;
    std::string text_;
};

} // namespace mexpr
