#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relmark {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value cannot be represented as a cell word (overflow, excess precision, bad text).
class CodecError : public Error {
public:
    using Error::Error;
};

/// Invalid key material.
class KeyError : public Error {
public:
    using Error::Error;
};

/// Invalid schema, parameters or table contents.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// CSV or JSON input that cannot be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : Error(format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0) {
            return message;
        }
        std::string where = "line " + std::to_string(line);
        if (column != 0) {
            where += ", column " + std::to_string(column);
        }
        return where + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

/// File system failures.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace relmark
