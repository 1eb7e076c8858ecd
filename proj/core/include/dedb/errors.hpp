#pragma once

#include <stdexcept>
#include <string>

namespace dedb {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical or grammatical failure while reading program text.
struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line(line), column(column) {}
    int line;
    int column;
};

// Structural problem with a parsed database (safety, arity, predicate class).
struct LoadError : Error {
    using Error::Error;
};

struct SafetyError : LoadError {
    SafetyError(const std::string& rule, const std::string& variable)
        : LoadError("unsafe rule " + rule + ": variable " + variable +
                    " does not occur in a positive body literal"),
          rule(rule), variable(variable) {}
    std::string rule;
    std::string variable;
};

// A computation that requires a stratification was run on rules without one.
struct UnstratifiableError : Error {
    explicit UnstratifiableError(const std::string& cycle)
        : Error("rules are not stratifiable; negative cycle: " + cycle), cycle(cycle) {}
    std::string cycle;
};

// No model satisfies the integrity constraints.
struct InconsistencyError : Error {
    using Error::Error;
};

// Model enumeration hit the configured cap on branching atoms.
struct EnumerationCapError : Error {
    using Error::Error;
};

// Malformed or ineffective update / view-update request.
struct RequestError : Error {
    using Error::Error;
};

struct InternalError : Error {
    using Error::Error;
};

}  // namespace dedb
