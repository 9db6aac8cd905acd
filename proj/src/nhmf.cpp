#include "kron/nhmf.hpp"

#include <algorithm>
#include <numeric>

#include "kron/errors.hpp"
#include "kron/parallel.hpp"

namespace kron {

namespace {

void check_levels(const TorsionPoint& s, long N, const TorsionPoint& t, long D) {
    if (N < 1 || D < 1) throw DomainError("torsion levels must be positive");
    if (std::gcd(N, D) != 1) throw DomainError("N and D must be coprime");
    if (N % s.order() != 0) throw DomainError("s is not N-torsion");
    if (D % t.order() != 0) throw DomainError("t is not D-torsion");
    if (s.is_zero() || t.is_zero()) throw DomainError("s and t must be nonzero");
}

long floor_div(long a, long n) {
    long q = a / n;
    if ((a % n != 0) && ((a < 0) != (n < 0))) --q;
    return q;
}

// e~(D s, .) is meant with D s = D times a representative of s, which is well
// defined mod D Gamma only. times() reduces mod Gamma; e*(z + g, w) = <g, w>^{-1} e*(z, w)
// gives the phase that undoes the reduction.
Complex unreduced_phase(const TorsionPoint& s, long D, const TorsionPoint& w, const Lattice& L) {
    long n = s.denominator();
    long qa = floor_div(D * s.a(), n), qb = floor_div(D * s.b(), n);
    return conj(pairing_lattice(qa, qb, w, L));
}

Complex round_out(const Complex& z, int bits) {
    PrecisionGuard g(bits);
    return z * Real(1);
}

}  // namespace

SymHodgeVector SymHodgeVector::zero(int k, int r) {
    SymHodgeVector v;
    v.k = k;
    v.r = r;
    v.coeffs.assign(std::min(k, r) + 1, Complex());
    return v;
}

SymHodgeVector& SymHodgeVector::operator+=(const SymHodgeVector& o) {
    if (o.k != k || o.r != r) throw DomainError("adding Hodge vectors of different type");
    for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}

Complex hodge_projection(const SymHodgeVector& v) {
    if (v.coeffs.empty()) return Complex();
    return v.coeffs[0];
}

SymHodgeVector algebraic_ek(int k, int r, const TorsionPoint& s, long N, const TorsionPoint& t,
                            long D, const Lattice& L, const PrecisionContext& ctx,
                            EKMethod method) {
    if (k < 0 || r < 0) throw DomainError("k and r must be nonnegative");
    check_levels(s, N, t, D);
    const TorsionPoint Ds = s.times(D), Nt = t.times(N);
    SymHodgeVector v = SymHodgeVector::zero(k, r);
    PrecisionGuard g(ctx.work_bits());
    const Real& A = L.area_A();
    const Complex phase = unreduced_phase(s, D, Nt, L);
    for (int i = 0; i <= std::min(k, r); ++i) {
        Real c = binomial(r, i) * binomial(k, i) / pow(A, static_cast<long>(i));
        if (i % 2) c = -c;
        v.coeffs[i] = phase * c * ek_normalized(k - i, r - i, Ds, Nt, L, ctx, method).value;
    }
    for (auto& c : v.coeffs) c = round_out(c, ctx.prec_bits);
    return v;
}

SymHodgeVector algebraic_ek(int k, int r, const TorsionPoint& s, const TorsionPoint& t,
                            const Lattice& L, const PrecisionContext& ctx, EKMethod method) {
    return algebraic_ek(k, r, s, s.order(), t, t.order(), L, ctx, method);
}

SymHodgeVector d_variant(int k, int r, const TorsionPoint& s, long N, long D, const Lattice& L,
                         const PrecisionContext& ctx, EKMethod method) {
    if (D < 2) throw DomainError("D must be at least 2");
    const auto ts = torsion_points(D, false);
    std::vector<SymHodgeVector> parts(ts.size());
    parallel_for(ts.size(), [&](size_t i) {
        parts[i] = algebraic_ek(k, r, s, N, ts[i], D, L, ctx, method);
    });
    PrecisionGuard g(ctx.work_bits());
    SymHodgeVector acc = SymHodgeVector::zero(k, r);
    for (const auto& p : parts) acc += p;
    for (auto& c : acc.coeffs) c = round_out(c, ctx.prec_bits);
    return acc;
}

KatzComparison katz_comparison_check(int k, int r, long a, long b, long N, long D,
                                     const Lattice& L, const PrecisionContext& ctx) {
    TorsionPoint s(a, b, N);
    if (s.is_zero()) throw DomainError("(a, b) must be nonzero mod N");
    KatzComparison out;
    out.lhs = hodge_projection(d_variant(k, r, s, N, D, L, ctx));

    PrecisionGuard g(ctx.work_bits());
    const Real& A = L.area_A();
    const TorsionPoint zero;
    // Phi(x) = (-1)^{k+r} k! (N/A)^r N^{k-r} K*_{k+r+1}(0, x, k+1)
    auto phi = [&](const TorsionPoint& x) {
        Complex K = lerch_Kstar(k + r + 1, zero, x, Complex(k + 1), L, ctx);
        Real c = factorial(k) * pow(Real(N) / A, static_cast<long>(r)) *
                 pow(Real(N), static_cast<long>(k - r));
        if ((k + r) % 2) c = -c;
        return K * c;
    };
    Real Dpow = pow(Real(D), static_cast<long>(k - r + 1));
    Complex rhs = (phi(s) * Dpow - phi(s.times(D))) * pow(Real(N), static_cast<long>(-k));
    out.rhs = round_out(rhs, ctx.prec_bits);
    Real scale = abs(out.rhs);
    out.defect = scale.is_zero() ? abs(out.lhs) : abs(out.lhs - out.rhs) / scale;
    return out;
}

}  // namespace kron
