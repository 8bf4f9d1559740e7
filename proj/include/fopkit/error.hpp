#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fopkit {

/// Byte range inside a parsed text, plus 1-based line/column of `begin`.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

enum class ErrorKind {
    Syntax,
    ArityMismatch,
    UnknownSymbol,
    InvalidVocabulary,
    UnknownVocabulary,
    OutOfUniverse,
    MissingConstant,
    VocabularyMismatch,
    UnboundVariable,
    BudgetExceeded,
    NotUniversal,
    NotLiteral,
    ConstantNotUnique,
    NotProjective,
    UnsupportedFormula,
    UnknownProblem,
    NoFreshVertex,
    PreconditionViolation,
    ContradictoryWitnessBuilder,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Errors raised by the text front-end; always carry a span inside the input.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, const std::string& message, SourceSpan span)
        : Error(kind, message + " at line " + std::to_string(span.line) + ", column " +
                          std::to_string(span.column)),
          span_(span) {}

    const SourceSpan& span() const noexcept { return span_; }

private:
    SourceSpan span_;
};

/// Raised when an exhaustive search would visit more candidates than allowed.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, std::string needed, std::string budget)
        : Error(ErrorKind::BudgetExceeded,
                what + " needs " + needed + " enumerations, budget is " + budget),
          needed_(std::move(needed)) {}

    /// Exact number of enumerations the operation would need, in decimal.
    const std::string& needed() const noexcept { return needed_; }

private:
    std::string needed_;
};

}  // namespace fopkit
