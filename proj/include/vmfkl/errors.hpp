#pragma once

#include <stdexcept>
#include <string>

namespace vmfkl {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exponential integral requested at an order with no supported evaluation path.
class UnsupportedOrder : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedDimension : public DomainError {
public:
    using DomainError::DomainError;
};

// Adaptive integration ran out of subdivisions before meeting its tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejection loop exceeded its iteration cap.
class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vmfkl
