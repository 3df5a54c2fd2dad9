#pragma once

#include <stdexcept>
#include <string>

namespace ffspec {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Series did not decay below the tail tolerance at the declared max order.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Dense linear solve or eigensolve failed.
class SolveError : public Error {
public:
    using Error::Error;
};

class InconsistentDataError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class DisambiguationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ffspec
