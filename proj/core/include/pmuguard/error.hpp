#pragma once

#include <stdexcept>
#include <string>

namespace pmuguard {

// Base for every error raised by the library. The CLI catches this type and
// turns it into a one-line diagnostic plus a nonzero exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

}  // namespace pmuguard
