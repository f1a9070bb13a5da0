#pragma once

#include <stdexcept>
#include <string>

namespace saldl {

// Base for every error thrown by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class ParseErrorKind {
    BadMagic,
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedPayload,
};

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, const std::string& what)
        : Error(what), kind_(kind) {}

    ParseErrorKind kind() const noexcept { return kind_; }

private:
    ParseErrorKind kind_;
};

// NaN/Inf or divergence during training or verification.
class NumericError : public Error {
public:
    using Error::Error;
};

// A pipeline stage was asked to run on parameters that were never trained.
class UntrainedError : public Error {
public:
    using Error::Error;
};

}  // namespace saldl
