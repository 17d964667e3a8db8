#pragma once

#include <stdexcept>
#include <string>

namespace dgforge {

// Base class of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldMismatch : public Error {
public:
    FieldMismatch() : Error("field mismatch") {}
    explicit FieldMismatch(const std::string& what) : Error("field mismatch: " + what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class DependentColumns : public Error {
public:
    explicit DependentColumns(const std::string& what) : Error(what) {}
};

// A structural axiom (d^2 = 0, associativity, Leibniz, ...) failed.
class VerificationError : public Error {
public:
    explicit VerificationError(const std::string& what) : Error(what) {}
};

// A requested degree lies outside the range a computation can certify.
class WindowError : public Error {
public:
    explicit WindowError(const std::string& what) : Error(what) {}
};

// Generator cap or another configured resource limit was hit.
class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

} // namespace dgforge
