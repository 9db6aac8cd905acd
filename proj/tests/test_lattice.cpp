#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "kron/lattice.hpp"
#include "support.hpp"

using namespace kron;
using kt::cplx;
using kt::rel;

namespace {

using cld = std::complex<long double>;

// Symmetric square-box sums over Z w1 + Z w2 minus {0}.
template <class F>
cld box_sum(cld w1, cld w2, int R, F f) {
    cld s = 0;
    for (int m = -R; m <= R; ++m)
        for (int n = -R; n <= R; ++n) {
            if (m == 0 && n == 0) continue;
            s += f(cld(m) * w1 + cld(n) * w2);
        }
    return s;
}

// Weierstrass zeta from its defining series, extrapolated in the box radius.
cld zeta_oracle(cld z, cld w1, cld w2) {
    std::vector<cld> vals;
    for (int R = 16; R <= 512; R *= 2)
        vals.push_back(1.0L / z + box_sum(w1, w2, R, [&](cld g) {
                           return 1.0L / (z - g) + 1.0L / g + z / (g * g);
                       }));
    return kt::richardson(vals, {2, 3, 4, 5, 6});
}

// log sigma from the Weierstrass product, extrapolated in the box radius.
cld log_sigma_oracle(cld z, cld w1, cld w2) {
    std::vector<cld> vals;
    for (int R = 16; R <= 512; R *= 2)
        vals.push_back(std::log(z) + box_sum(w1, w2, R, [&](cld g) {
                           cld u = z / g;
                           return std::log(1.0L - u) + u + u * u / 2.0L;
                       }));
    return kt::richardson(vals, {2, 3, 4, 5, 6});
}

}  // namespace

TEST_CASE("pairing basics") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    Lattice L = Lattice::from_periods(cplx(0, 1), cplx(1, 0), ctx);  // Z + iZ
    Complex z = cplx(0.37, -0.21), w = cplx(-1.3, 0.55);

    CHECK(rel(pairing(z, Complex(0), L), Complex(1)) == 0.0);
    CHECK(kt::absdiff(pairing(z, z, L), Complex(1)) < 1e-70);
    CHECK(kt::absdiff(pairing(z, w, L) * pairing(w, z, L), Complex(1)) < 1e-70);
    CHECK(kt::absdiff(abs(pairing(z, w, L)), Real(1)) < 1e-70);

    // A = 1/pi on Z + iZ, so <1, i/5> = exp(2i Im(1 * conj(i/5)) pi) = exp(-2 pi i/5).
    Complex expect = expi(-const_pi() * 2L / 5L);
    CHECK(kt::absdiff(pairing(Complex(1), Complex(Real(0), Real(1) / 5L), L), expect) < 1e-70);
}

TEST_CASE("torsion pairing is an exact root of unity matching the float formula") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    for (const Complex& tau : {kt::tau_i(), kt::tau_rho(), cplx(0.3, 1.7)}) {
        Lattice L = Lattice::from_tau(tau, ctx);
        for (long N : {3L, 5L, 7L})
            for (const auto& t : torsion_points(N, false)) {
                for (long m = -2; m <= 2; ++m)
                    for (long n = -2; n <= 2; ++n) {
                        Complex exact = pairing_lattice(m, n, t, L);
                        Complex flt = pairing(L.point(m, n), t.embed(L), L);
                        CHECK(kt::absdiff(exact, flt) < 1e-60);
                        CHECK(kt::absdiff(pow(exact, N), Complex(1)) < 1e-60);
                    }
            }
    }
}

TEST_CASE("torsion point canonical form") {
    CHECK(TorsionPoint(2, 4, 6) == TorsionPoint(1, 2, 3));
    CHECK(TorsionPoint(5, -1, 5) == TorsionPoint(0, 4, 5));
    CHECK(TorsionPoint(3, 3, 3).is_zero());
    CHECK(TorsionPoint(2, 0, 4).order() == 2);
    CHECK((TorsionPoint(1, 0, 2) + TorsionPoint(0, 1, 3)) == TorsionPoint(3, 2, 6));
    CHECK(torsion_points(4, false).size() == 15);
}

TEST_CASE("lattice invariants") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    Lattice L = Lattice::from_tau(kt::tau_rho(), ctx);
    CHECK(L.tau().im.sign() > 0);
    Real im12 = L.omega1().im * L.omega2().re - L.omega1().re * L.omega2().im;
    CHECK(abs(L.area_A() - abs(im12) / const_pi()).to_double() < 1e-70);
    CHECK(legendre_residual(L).to_double() < std::ldexp(1.0, -256 + 8));

    // Negative orientation: same point set, same A, same theta.
    Lattice Ln = Lattice::from_periods(cplx(1, 0), kt::tau_rho(), ctx);
    CHECK(Ln.orientation() == -1);
    CHECK(rel(Complex(Ln.area_A()), Complex(L.area_A())) < 1e-70);
    CHECK(legendre_residual(Ln).to_double() < std::ldexp(1.0, -256 + 8));
    Complex z = cplx(0.41, 0.27);
    CHECK(rel(theta(z, Ln, ctx), theta(z, L, ctx)) < 1e-70);
    CHECK(rel(Ln.e2star(), L.e2star()) < 1e-70);
}

TEST_CASE("sigma: zero, oddness, product oracle") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    Lattice L = Lattice::from_periods(cplx(0, 1), cplx(1, 0), ctx);
    CHECK(sigma(Complex(0), L, ctx).is_zero());
    Complex z = cplx(0.3, 0.11);
    CHECK(rel(sigma(-z, L, ctx), -sigma(z, L, ctx)) < 1e-70);

    for (const Complex& zz : {cplx(0.3, 0), cplx(0.45, -0.3), cplx(-0.2, 0.6)}) {
        cld expect = std::exp(log_sigma_oracle(kt::to_ld(zz), {0, 1}, {1, 0}));
        cld got = kt::to_ld(sigma(zz, L, ctx));
        CHECK(std::abs(got - expect) / std::abs(expect) < 1e-11L);
    }
}

TEST_CASE("weierstrass zeta and Z against the series oracle") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    for (const Complex& tau : {kt::tau_i(), kt::tau_rho()}) {
        Lattice L = Lattice::from_tau(tau, ctx);
        cld w1 = kt::to_ld(L.omega1()), w2 = kt::to_ld(L.omega2());
        for (const Complex& z : {cplx(0.3, 0.2), cplx(-0.15, 0.4)}) {
            cld zo = zeta_oracle(kt::to_ld(z), w1, w2);
            cld zeta = kt::to_ld(weierstrass_zeta(z, L, ctx));
            CHECK(std::abs(zeta - zo) / std::abs(zo) < 1e-11L);
            cld Zexp = zo - kt::to_ld(L.e2star()) * kt::to_ld(z);
            cld Zgot = kt::to_ld(log_derivative_Z(z, L, ctx));
            CHECK(std::abs(Zgot - Zexp) / std::abs(Zexp) < 1e-10L);
        }
    }
}

TEST_CASE("Z: oddness, periodicity shift, pole guard") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    Lattice L = Lattice::from_tau(kt::tau_rho(), ctx);
    Complex z = cplx(0.23, 0.17);
    CHECK(rel(log_derivative_Z(-z, L, ctx), -log_derivative_Z(z, L, ctx)) < 1e-70);
    for (long m = -2; m <= 2; ++m)
        for (long n = -2; n <= 2; ++n) {
            Complex gam = L.point(m, n);
            Complex diff = log_derivative_Z(z + gam, L, ctx) - log_derivative_Z(z, L, ctx);
            CHECK(kt::absdiff(diff, conj(gam) / L.area_A()) < 1e-65);
        }
    CHECK_THROWS_AS(log_derivative_Z(L.point(1, 1), L, ctx), PoleError);
}

TEST_CASE("theta: normalization and transformation law") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (const Complex& tau : {kt::tau_i(), kt::tau_rho(), cplx(-0.4, 1.3)}) {
        Lattice L = Lattice::from_tau(tau, ctx);
        CHECK(theta(Complex(0), L, ctx).is_zero());

        Real h = ldexp(Real(1), -70);
        Complex d = (theta(Complex(h), L, ctx) - theta(Complex(-h), L, ctx)) / (h * 2L);
        CHECK(kt::absdiff(d, Complex(1)) < 1e-35);

        auto zero = theta_transform_check(0, 0, cplx(0.1, 0.2), L, ctx);
        CHECK(zero.alpha == 1);
        CHECK(zero.defect.to_double() == 0.0);

        for (int trial = 0; trial < 4; ++trial) {
            Complex z = cplx(U(rng), U(rng));
            for (long m = -3; m <= 3; ++m)
                for (long n = -3; n <= 3; ++n) {
                    auto r = theta_transform_check(m, n, z, L, ctx);
                    CHECK(r.defect.to_double() < ctx.tol());
                    int expect = ((m + n + m * n) % 2 == 0) ? 1 : -1;
                    CHECK(r.alpha == expect);
                }
        }
    }
}

TEST_CASE("theta: homogeneity and precision doubling") {
    auto c1 = kt::ctx256();
    auto c2 = kron::PrecisionContext::with_bits(512);
    PrecisionGuard g(c2.work_bits());
    Lattice L1 = Lattice::from_tau(kt::tau_rho(), c1);
    Lattice L2 = Lattice::from_tau(kt::tau_rho(), c2);
    Complex z = cplx(0.61, -0.47);
    CHECK(rel(theta(z, L1, c1), theta(z, L2, c2)) < c1.tol());
    CHECK(rel(log_derivative_Z(z, L1, c1), log_derivative_Z(z, L2, c2)) < c1.tol());

    Complex lam = cplx(1.3, 0.7);
    Lattice Lg = Lattice::from_tau(cplx(0.3, 1.1), c1);
    Lattice Ls = Lattice::from_periods(Lg.omega1() * lam, Lg.omega2() * lam, c1);
    CHECK(rel(theta(z * lam, Ls, c1), theta(z, Lg, c1) * lam) < 1e-65);
    CHECK(rel(Ls.e2star() * lam * lam, Lg.e2star()) < 1e-65);
    CHECK(abs(Lg.e2star()).to_double() > 0.1);
}

TEST_CASE("cached invariants reproduce values bitwise") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    Lattice L = Lattice::from_tau(kt::tau_rho(), ctx);
    std::string text = L.invariants().serialize();
    LatticeInvariants inv = LatticeInvariants::parse(text);
    CHECK(inv.serialize() == text);
    Lattice Lc = Lattice::from_periods(L.omega1(), L.omega2(), ctx, &inv);
    Complex z = cplx(0.3, 0.9);
    Complex a = theta(z, L, ctx), b = theta(z, Lc, ctx);
    CHECK(a.re == b.re);
    CHECK(a.im == b.im);
    CHECK(Lc.e2star().re == L.e2star().re);
    CHECK_THROWS_AS(LatticeInvariants::parse("prec_bits=288\nfoo=1\n"), ParseError);
}
