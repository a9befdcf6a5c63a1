#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlopt {

// Byte range [begin, end) into the source text a node or error refers to.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const SourceSpan&) const = default;
};

// Root of the toolkit's error hierarchy. The CLI maps the three families
// below to exit codes: syntax -> 1, semantic -> 2, io -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::string msg, SourceSpan span)
        : Error(std::move(msg)), span(span) {}

    SourceSpan span;
};

class LexError : public SyntaxError {
public:
    LexError(std::string msg, std::size_t offset)
        : SyntaxError(std::move(msg), SourceSpan{offset, offset + 1}) {}

    std::size_t offset() const { return span.begin; }
};

class ParseError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

// Temporal operator written without an explicit [a,b] interval.
class MissingIntervalError : public ParseError {
public:
    using ParseError::ParseError;
};

class SemanticError : public Error {
public:
    using Error::Error;
};

class UnknownWeightError : public SemanticError {
public:
    explicit UnknownWeightError(std::string weight_name)
        : SemanticError("unknown weight '" + weight_name + "'"),
          name(std::move(weight_name)) {}

    std::string name;
};

class WeightArityError : public SemanticError {
public:
    WeightArityError(std::string weight_name, std::size_t expected_len, std::size_t got_len)
        : SemanticError("weight '" + weight_name + "' has length " +
                        std::to_string(got_len) + ", expected " +
                        std::to_string(expected_len)),
          name(std::move(weight_name)), expected(expected_len), got(got_len) {}

    std::string name;
    std::size_t expected;
    std::size_t got;
};

// Negation pushed onto an Until node; the AST has no Release operator.
class UnsupportedNegationError : public SemanticError {
public:
    UnsupportedNegationError()
        : SemanticError("cannot negate an Until subformula (no Release operator)") {}
};

class TraceTooShortError : public SemanticError {
public:
    TraceTooShortError(int needed_steps, int got_steps)
        : SemanticError("trace too short: formula needs steps 0.." +
                        std::to_string(needed_steps) + " but trace ends at step " +
                        std::to_string(got_steps)),
          needed(needed_steps), got(got_steps) {}

    int needed;
    int got;
};

class MissingBoundError : public SemanticError {
public:
    explicit MissingBoundError(std::string signal_name = {})
        : SemanticError(signal_name.empty()
                            ? std::string("variable bounds required but not given")
                            : "no variable bounds given for signal '" + signal_name + "'"),
          signal(std::move(signal_name)) {}

    std::string signal;
};

class UnsupportedOperatorError : public SemanticError {
public:
    explicit UnsupportedOperatorError(std::string what_failed)
        : SemanticError(what_failed) {}
};

class UnknownSignalError : public SemanticError {
public:
    explicit UnknownSignalError(std::string signal_name)
        : SemanticError("unknown signal '" + signal_name + "'"),
          signal(std::move(signal_name)) {}

    std::string signal;
};

// Wraps a per-trace failure inside batch_robustness with the trace index.
class BatchError : public SemanticError {
public:
    BatchError(std::size_t trace_index, const std::string& inner)
        : SemanticError("trace[" + std::to_string(trace_index) + "]: " + inner),
          index(trace_index) {}

    std::size_t index;
};

class DimensionError : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class HorizonOverrideError : public SemanticError {
public:
    HorizonOverrideError(int override_value, int formula_horizon)
        : SemanticError("horizon override " + std::to_string(override_value) +
                        " is smaller than the formula horizon " +
                        std::to_string(formula_horizon)) {}
};

// MILP model construction failures.
class ModelError : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class DuplicateNameError : public ModelError {
public:
    explicit DuplicateNameError(const std::string& name)
        : ModelError("variable name '" + name + "' already used") {}
};

class BadBoundsError : public ModelError {
public:
    using ModelError::ModelError;
};

class UnknownVarError : public ModelError {
public:
    explicit UnknownVarError(int var_id)
        : ModelError("unknown variable id " + std::to_string(var_id)) {}
};

class NoObjectiveError : public ModelError {
public:
    NoObjectiveError() : ModelError("model has no objective") {}
};

class UnboundedSourceError : public ModelError {
public:
    explicit UnboundedSourceError(const std::string& name)
        : ModelError("abs-link source '" + name + "' must have finite bounds") {}
};

class NotOptimalError : public SemanticError {
public:
    NotOptimalError() : SemanticError("solution status is not Optimal") {}
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace tlopt
