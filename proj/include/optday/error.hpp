#pragma once

#include <stdexcept>
#include <string>

namespace optday {

// Base for every error raised by the library. The CLI maps SchemaError and
// UsageError to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file does not match its declared schema (e.g. missing column).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Bad invocation or configuration.
class UsageError : public Error {
public:
    using Error::Error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class LeapYearError : public InvalidArgument {
public:
    explicit LeapYearError(int year)
        : InvalidArgument("leap year " + std::to_string(year) +
                          " is not supported (365-day calendar only)") {}
};

}  // namespace optday
