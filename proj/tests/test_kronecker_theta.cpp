#include <doctest.h>

#include <chrono>

#include "kron/errors.hpp"
#include "kron/kronecker_theta.hpp"
#include "support.hpp"

using namespace kron;
using kt::cplx;
using kt::rel;

namespace {

Lattice lat_i() { return Lattice::from_tau(kt::tau_i(), kt::ctx256()); }

Complex eval_series(const TaylorGrid& g, const Complex& z, const Complex& w) {
    Complex s;
    Complex wa(1);
    for (size_t a = 0; a < g.c.size(); ++a) {
        Complex zb(1);
        for (size_t b = 0; b < g.c[a].size(); ++b) {
            s += g.c[a][b] * zb * wa;
            zb *= z;
        }
        wa *= w;
    }
    return s;
}

}  // namespace

TEST_CASE("Theta: symmetry, residue, pole guard") {
    auto ctx = kt::ctx256();
    Lattice L = lat_i();
    PrecisionGuard g(ctx.work_bits());
    Complex z = cplx(0.21, 0.13), w = cplx(-0.37, 0.29);
    CHECK(rel(kronecker_theta(z, w, L, ctx), kronecker_theta(w, z, L, ctx)) < 1e-70);
    // z Theta(z, w) -> 1 at z = 0, linearly in z
    Real h = ldexp(Real(1), -100);
    Complex zr = Complex(h, h) * kronecker_theta(Complex(h, h), w, L, ctx);
    CHECK(abs(zr - Complex(1)).to_double() < 1e-28);
    CHECK_THROWS_AS(kronecker_theta(Complex(0), w, L, ctx), PoleError);
    CHECK_THROWS_AS(kronecker_theta(z, L.point(1, -2), L, ctx), PoleError);
}

TEST_CASE("Theta: quasi-periodicity in z") {
    // Theta(z + g, w) = exp(w conj(g)/A) Theta(z, w)
    auto ctx = kt::ctx256();
    Lattice L = Lattice::from_tau(cplx(0.3, 1.1), ctx);
    PrecisionGuard g(ctx.work_bits());
    Complex z = cplx(0.21, 0.13), w = cplx(-0.37, 0.29);
    Complex base = kronecker_theta(z, w, L, ctx);
    for (auto [m, n] : {std::pair{1, 0}, {0, 1}, {2, -1}}) {
        Complex gam = L.point(m, n);
        Complex factor = exp(w * conj(gam) / L.area_A());
        Complex shifted = kronecker_theta(z + gam, w, L, ctx);
        CHECK(rel(shifted, factor * base) < 1e-70);
    }
}

TEST_CASE("cauchy_coeffs2 recovers a known expansion") {
    auto ctx = kt::ctx256();
    PrecisionGuard g(ctx.work_bits());
    Function2 f = [](const Complex& z, const Complex& w) { return exp(z + w * 2L); };
    auto grid = cauchy_coeffs2(f, Real(1) / 2L, Real(1) / 3L, 5, 6, ctx);
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 6; ++b) {
            Complex want(pow(Real(2), static_cast<long>(a)) / (factorial(a) * factorial(b)));
            CHECK(rel(grid.c[a][b], want) < 1e-70);
        }
}

TEST_CASE("translated Taylor grid: reconstruction and radius independence") {
    auto ctx = kt::ctx256();
    Lattice L = lat_i();
    PrecisionGuard g(ctx.work_bits());
    auto tr = ThetaTranslate::from_torsion(TorsionPoint(1, 2, 5), TorsionPoint(2, 1, 3), L);
    auto t0 = std::chrono::steady_clock::now();
    auto g1 = taylor_coeffs(tr, 4, 4, ctx);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("taylor 5x5 at 256 bits: " << secs << " s, nodes " << g1.nodes);
    CHECK(g1.est_error.to_double() < ctx.tol());
    CHECK(rel(g1.c[0][0], translated_theta(tr, Complex(0), Complex(0), ctx)) < 1e-70);

    TaylorOptions opt;
    opt.rho_fraction = 0.4;
    auto g2 = taylor_coeffs(tr, 4, 4, ctx, opt);
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) CHECK(rel(g1.c[a][b], g2.c[a][b]) < ctx.tol());

    auto big = taylor_coeffs(tr, 24, 24, ctx);
    Complex z = Complex(g1.rho_z / 8L, g1.rho_z / 16L), w = Complex(-g1.rho_w / 10L, g1.rho_w / 7L);
    CHECK(rel(eval_series(big, z, w), translated_theta(tr, z, w, ctx)) < 1e-30);
}

TEST_CASE("translated Taylor grid: swapping the translates") {
    // Theta_{z0,w0}(z,w) = <w0,z0> Theta_{w0,z0}(w,z)
    auto ctx = kt::ctx256();
    Lattice L = Lattice::from_tau(kt::tau_rho(), ctx);
    PrecisionGuard g(ctx.work_bits());
    auto a = ThetaTranslate::from_torsion(TorsionPoint(1, 3, 7), TorsionPoint(1, 1, 4), L);
    auto b = ThetaTranslate::from_torsion(TorsionPoint(1, 1, 4), TorsionPoint(1, 3, 7), L);
    auto ga = taylor_coeffs(a, 3, 3, ctx), gb = taylor_coeffs(b, 3, 3, ctx);
    Complex f = pairing(a.w0, a.z0, L);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) CHECK(rel(ga.c[i][j], f * gb.c[j][i]) < ctx.tol());
}

TEST_CASE("Taylor grid: precision doubling and pole at the center") {
    auto c256 = kt::ctx256();
    auto c512 = PrecisionContext::with_bits(512);
    Lattice L256 = lat_i();
    Lattice L512 = Lattice::from_tau(kt::tau_i(), c512);
    auto s = TorsionPoint(1, 0, 2), t = TorsionPoint(0, 1, 3);
    TaylorGrid lo, hi;
    {
        PrecisionGuard g(c256.work_bits());
        lo = taylor_coeffs(ThetaTranslate::from_torsion(s, t, L256), 2, 2, c256);
    }
    {
        PrecisionGuard g(c512.work_bits());
        hi = taylor_coeffs(ThetaTranslate::from_torsion(s, t, L512), 2, 2, c512);
    }
    PrecisionGuard g(c512.work_bits());
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) CHECK(rel(lo.c[a][b], hi.c[a][b]) < c256.tol());
    CHECK(lo.est_error.to_double() < c256.tol());
    CHECK_THROWS_AS(
        taylor_coeffs(ThetaTranslate::from_torsion(TorsionPoint(0, 0, 1), t, L256), 2, 2, c256),
        ContourTooLarge);
}

TEST_CASE("translate at real torsion matches exp(-(Nz+Dw+1)/A) Theta(Dz+Ds, Nw+Nt)") {
    auto ctx = kt::ctx256();
    Lattice L = lat_i();
    PrecisionGuard g(ctx.work_bits());
    const long N = 5, D = 3;
    TorsionPoint s(0, 1, N), t(0, 1, D);  // s = 1/N, t = 1/D
    ThetaTranslate tr{s.embed(L) * D, t.embed(L) * N, L};
    Complex z = cplx(0.11, 0.07), w = cplx(-0.04, 0.09);
    Complex lhs = translated_theta(tr, z * D, w * N, ctx);
    Complex ex = (z * N + w * D + Complex(1)) / L.area_A();
    Complex rhs = exp(-ex) * kronecker_theta(z * D + s.embed(L) * D, w * N + t.embed(L) * N, L, ctx);
    CHECK(rel(lhs, rhs) < 1e-70);
    ThetaTranslate none{Complex(), Complex(), L};
    CHECK(rel(translated_theta(none, z, w, ctx), kronecker_theta(z, w, L, ctx)) < 1e-70);
}
