// types.hpp — numeric aliases and the error hierarchy shared by every module

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nqca {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double pi = std::numbers::pi;

// Bad argument or parameter outside its documented range.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// |p - q| = 1 in the (p, q) parametrisation: 1 - |eta| vanishes.
class SingularParameterError : public DomainError {
public:
    using DomainError::DomainError;
};

// A state violated trace, Hermiticity, or positivity beyond tolerance.
class InvalidStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A decay fit found a non-negative slope.
class NoDecayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nqca
