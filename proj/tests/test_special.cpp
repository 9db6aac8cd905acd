#include <doctest.h>

#include <complex>

#include "kron/errors.hpp"
#include "kron/special.hpp"
#include "support.hpp"

using namespace kron;
using kt::cplx;
using kt::rel;

namespace {

// Composite Simpson on t = x + u, u in [0, 80].
std::complex<double> gamma_upper_quad(std::complex<double> s, double x) {
    const int n = 200000;
    const double h = 80.0 / n;
    auto f = [&](double u) {
        return std::pow(std::complex<double>(x + u), s - 1.0) * std::exp(-(x + u));
    };
    std::complex<double> acc = f(0) + f(80.0);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0;
}

std::complex<double> to_cd(const Complex& z) { return {z.re.to_double(), z.im.to_double()}; }

Real cosh_r(const Real& x) { return (exp(x) + exp(-x)) / 2L; }
Real sinh_r(const Real& x) { return (exp(x) - exp(-x)) / 2L; }

}  // namespace

TEST_CASE("gamma: known values") {
    PrecisionGuard g(256);
    CHECK(rel(gamma(Complex(5)), Complex(24)) < 1e-70);
    CHECK(rel(gamma(Complex(Real(1) / 2L, Real(0))), Complex(sqrt(const_pi()))) < 1e-70);
    Complex g1i = gamma(cplx(1, 1));
    CHECK(std::abs(g1i.re.to_double() - 0.49801566811835604271) < 1e-15);
    CHECK(std::abs(g1i.im.to_double() + 0.15494982830181068512) < 1e-15);
    CHECK_THROWS_AS(gamma(Complex(-3)), PoleError);
    CHECK(rgamma(Complex(-3)).is_zero());
    CHECK(rel(rgamma(Complex(4)), Complex(Real(1) / 6L)) < 1e-70);
}

TEST_CASE("gamma: modulus on vertical lines") {
    PrecisionGuard g(256);
    for (double t : {0.5, 1.7, 6.0, 23.0}) {
        Real pt = const_pi() * Real(t);
        Real lhs = norm(gamma(Complex(Real(1) / 2L, Real(t))));
        CHECK(rel(Complex(lhs), Complex(const_pi() / cosh_r(pt))) < 1e-70);
        Real lhs2 = norm(gamma(Complex(Real(0), Real(t))));
        CHECK(rel(Complex(lhs2), Complex(const_pi() / (Real(t) * sinh_r(pt)))) < 1e-70);
        // reflection branch agrees with the recurrence Gamma(s+1) = s Gamma(s)
        Complex s(Real(-2.25), Real(t));
        CHECK(rel(gamma(s + Complex(1)), s * gamma(s)) < 1e-70);
    }
}

TEST_CASE("E1 and Gamma(s, x) special cases") {
    PrecisionGuard g(256);
    CHECK(std::abs(expint_e1(Real(1)).to_double() - 0.21938393439552027368) < 1e-17);
    CHECK(rel(upper_gamma(Complex(0), Real(1)), Complex(expint_e1(Real(1)))) < 1e-70);
    for (double x : {0.3, 2.0, 9.5, 40.0}) {
        Real xr(x);
        Real erfc_v;
        mpfr_erfc(erfc_v.get(), sqrt(xr).get(), MPFR_RNDN);
        Complex half = upper_gamma(Complex(Real(1) / 2L, Real(0)), xr);
        CHECK(rel(half, Complex(sqrt(const_pi()) * erfc_v)) < 1e-70);
        CHECK(rel(upper_gamma(Complex(1), xr), Complex(exp(-xr))) < 1e-70);
    }
}

TEST_CASE("Gamma(s, x): recurrence across evaluation branches") {
    PrecisionGuard g(256);
    // Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}
    for (double x : {0.2, 3.0, 7.9, 12.0, 60.0, 200.0}) {
        Real xr(x);
        for (Complex s : {cplx(0.5, 0.3), cplx(-2.5, 1.0), cplx(3.25, -4.0), Complex(-3), Complex(2),
                          cplx(-1, 0.5), cplx(4.5, 0)}) {
            Complex lhs = upper_gamma(s + Complex(1), xr);
            Complex rhs = s * upper_gamma(s, xr) + exp(s * Complex(log(xr)) - Complex(xr));
            CHECK(rel(lhs, rhs) < 1e-65);
        }
    }
}

TEST_CASE("Gamma(s, x) against quadrature") {
    PrecisionGuard g(128);
    for (double x : {0.5, 4.0, 15.0}) {
        for (Complex s : {cplx(0.5, 0.3), cplx(-1.5, 2.0), cplx(3.0, -1.0), cplx(-2, 0)}) {
            auto want = gamma_upper_quad(to_cd(s), x);
            auto got = to_cd(upper_gamma(s, Real(x)));
            CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
        }
    }
}

TEST_CASE("Bernoulli numbers") {
    PrecisionGuard g(256);
    CHECK(rel(Complex(bernoulli_2k(1)), Complex(Real(1) / 6L)) < 1e-70);
    CHECK(rel(Complex(bernoulli_2k(2)), Complex(Real(-1) / 30L)) < 1e-70);
    CHECK(rel(Complex(bernoulli_2k(6)), Complex(Real(-691) / 2730L)) < 1e-70);
}
