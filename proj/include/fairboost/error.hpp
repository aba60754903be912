#pragma once

#include <stdexcept>
#include <string>

namespace fairboost {

enum class ErrorCode {
    InvalidArgument,
    Schema,
    DomainMismatch,
    EmptyClass,
    IterationCapExceeded,
    MeasureIdenticallyZero,
    BoundViolation,
    Io,
};

/// Base exception for every failure raised by the library. The C API maps
/// `code()` onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

/// Malformed input document. `path()` is a JSON pointer to the offending node.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(ErrorCode::Schema, path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class DomainMismatch : public Error {
public:
    explicit DomainMismatch(const std::string& what) : Error(ErrorCode::DomainMismatch, what) {}
};

class EmptyClass : public Error {
public:
    EmptyClass() : Error(ErrorCode::EmptyClass, "hypothesis class is empty") {}
};

class MeasureIdenticallyZero : public Error {
public:
    MeasureIdenticallyZero() : Error(ErrorCode::MeasureIdenticallyZero, "measure is identically zero") {}
};

}  // namespace fairboost
