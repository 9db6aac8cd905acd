#pragma once
// Gamma-type special functions at working precision.

#include <optional>

#include "kron/mp.hpp"

namespace kron {

// Exact integer value of s if s is a real integer.
std::optional<long> as_integer(const Complex& s);

Complex lgamma(const Complex& s);   // log Gamma(s), some branch; exp() is exact Gamma
Complex gamma(const Complex& s);    // throws PoleError at nonpositive integers
Complex rgamma(const Complex& s);   // 1/Gamma(s), entire

// Upper incomplete gamma Gamma(s, x) for real x > 0 and any complex s.
Complex upper_gamma(const Complex& s, const Real& x);

// Exponential integral E1(x) for x > 0.
Real expint_e1(const Real& x);

// B_{2k} as Reals at the working precision (cached as exact rationals).
Real bernoulli_2k(int k);

}  // namespace kron
