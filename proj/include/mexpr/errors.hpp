#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mexpr {

enum class EvalErrorKind { UnboundSymbol, UnsupportedOperation, ArithmeticOverflow };

/// Runtime evaluation failure; `detail` names the offending symbol or operation.
class EvalError : public std::runtime_error {
public:
    EvalError(EvalErrorKind kind, std::string detail, std::string context = {})
        : std::runtime_error(format(kind, detail, context)),
          kind_(kind),
          detail_(std::move(detail)) {}

    EvalErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    static std::string format(EvalErrorKind kind, const std::string& detail,
                              const std::string& context) {
        std::string msg;
        switch (kind) {
        case EvalErrorKind::UnboundSymbol:
            msg = "unbound symbol `" + detail + "`";
            break;
        case EvalErrorKind::UnsupportedOperation:
            msg = "unsupported operation `" + detail + "`";
            break;
        case EvalErrorKind::ArithmeticOverflow:
            msg = "arithmetic overflow in `" + detail + "`";
            break;
        }
        if (!context.empty())
            msg += " in context `" + context + "`";
        return msg;
    }

    EvalErrorKind kind_;
    std::string detail_;
};

enum class CompileErrorKind { UnsupportedOperation, NotRealField };

/// Raised at compile time, never at run time of a successfully compiled program.
class CompileError : public std::runtime_error {
public:
    CompileError(CompileErrorKind kind, std::string op, std::string context = {})
        : std::runtime_error(format(kind, op, context)), kind_(kind), op_(std::move(op)) {}

    CompileErrorKind kind() const { return kind_; }
    const std::string& op() const { return op_; }

private:
    static std::string format(CompileErrorKind kind, const std::string& op,
                              const std::string& context) {
        if (kind == CompileErrorKind::NotRealField)
            return "expression requires a real field but got `" + context + "`";
        std::string msg = "cannot compile: unsupported operation `" + op + "`";
        if (!context.empty())
            msg += " in context `" + context + "`";
        return msg;
    }

    CompileErrorKind kind_;
    std::string op_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset,
               std::vector<std::string> expected = {})
        : std::runtime_error(message + " (at offset " + std::to_string(offset) + ")"),
          message_(std::move(message)),
          offset_(offset),
          expected_(std::move(expected)) {}

    const std::string& message() const { return message_; }
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::string message_;
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class DiffError : public std::runtime_error {
public:
    explicit DiffError(const std::string& op)
        : std::runtime_error("cannot differentiate operation `" + op + "`") {}
};

/// Result of program validation; names the violated invariant and the
/// instruction it was detected at.
struct ValidationError {
    std::string message;
    std::size_t instruction = 0;
};

} // namespace mexpr
