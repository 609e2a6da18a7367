#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace impactlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (graph/dataset/weight files, MiniLang source).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column != 0) {
            out += ", column " + std::to_string(column);
        }
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// A reference to something that does not exist, or a cross-artifact mismatch.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Violated operation precondition (bad argument values, unknown ids).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The unmutated program fails some of its own tests.
class BaselineError : public Error {
public:
    using Error::Error;
};

/// The synthetic generator could not satisfy its constraints.
class GenerationError : public Error {
public:
    using Error::Error;
};

} // namespace impactlab
