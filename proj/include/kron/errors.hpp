#pragma once

#include <stdexcept>
#include <string>

namespace kron {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (bad orders, coprimality, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class NotConvergent : public Error {
public:
    using Error::Error;
};

class PrecisionBudget : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

class ContourTooLarge : public Error {
public:
    using Error::Error;
};

class DegreeExhausted : public Error {
public:
    using Error::Error;
};

class NotRational : public Error {
public:
    using Error::Error;
};

class NotDivisible : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace kron
