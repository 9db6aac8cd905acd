#pragma once
// Shared helpers for the unit tests.

#include <complex>
#include <vector>

#include "kron/lattice.hpp"
#include "kron/mp.hpp"
#include "kron/precision.hpp"

namespace kt {

using kron::Complex;
using kron::Real;

inline kron::PrecisionContext ctx256() { return kron::PrecisionContext::with_bits(256); }

inline Complex cplx(double re, double im) { return Complex(Real(re), Real(im)); }

inline Complex tau_i() { return cplx(0, 1); }

inline Complex tau_rho() {
    kron::PrecisionGuard g(400);
    return Complex(Real(1) / 2L, kron::sqrt(Real(3)) / 2L);
}

inline double rel(const Complex& a, const Complex& b) {
    Real d = kron::abs(a - b);
    Real m = kron::max(kron::abs(a), kron::abs(b));
    if (m.is_zero()) return d.to_double();
    return (d / m).to_double();
}

inline double absdiff(const Complex& a, const Complex& b) { return kron::abs(a - b).to_double(); }

inline std::complex<long double> to_ld(const Complex& z) {
    return {static_cast<long double>(z.re.to_double()), static_cast<long double>(z.im.to_double())};
}

// Richardson extrapolation of values v[i] at radii R0*2^i, eliminating
// error terms R^{-p} for p in `powers`.
inline std::complex<long double> richardson(std::vector<std::complex<long double>> v,
                                            const std::vector<int>& powers) {
    for (size_t j = 0; j < powers.size() && v.size() > 1; ++j) {
        long double f = std::pow(2.0L, powers[j]);
        std::vector<std::complex<long double>> w;
        for (size_t i = 0; i + 1 < v.size(); ++i) w.push_back((f * v[i + 1] - v[i]) / (f - 1));
        v = w;
    }
    return v.back();
}

}  // namespace kt
