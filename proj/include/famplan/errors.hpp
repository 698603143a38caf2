#pragma once

#include <stdexcept>
#include <string>

namespace famplan {

/// Invalid rule, probability or argument. The CLI maps this to exit code 1.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that was well posed but could not be completed numerically
/// (term cap, missing bracket, pole). The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TermCapError : public NumericError {
public:
    using NumericError::NumericError;
};

class BirthCapError : public NumericError {
public:
    using NumericError::NumericError;
};

class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

class NoSignChangeError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace famplan
