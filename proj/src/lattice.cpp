#include "kron/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kron/errors.hpp"

namespace kron {

namespace {

void require_precision(const Lattice& L, const PrecisionContext& ctx) {
    if (ctx.work_bits() > L.prec_bits())
        throw DomainError("lattice was calibrated at " + std::to_string(L.prec_bits()) +
                          " bits, request needs " + std::to_string(ctx.work_bits()));
}

Real im_mul_conj(const Complex& a, const Complex& b) {  // Im(a conj b)
    return a.im * b.re - a.re * b.im;
}

void theta1_series(const Complex& x, const Complex& q, double lq, int q_cap, Complex& th,
                   Complex* thp_out) {
    // sum_{n>=0} (-1)^n q^{n(n+1)} sin((2n+1)x), and the matching (2n+1) cos series.
    const bool want_d = thp_out != nullptr;
    Complex thp;
    const double yx = std::fabs(x.im.to_double());
    const double drop = (static_cast<double>(working_precision()) + 12.0) * std::log(2.0);

    Complex e = exp(mul_i(x));
    Complex einv = Complex(1) / e;
    Complex e2 = e * e;
    Complex e2inv = einv * einv;
    Complex q2 = q * q;

    Complex a = e, b = einv;  // e^{+-i(2n+1)x}
    Complex Q(1);             // q^{n(n+1)}
    Complex qstep = q2;       // q^{2n+2}
    th = Complex();
    double logmax = -1e300;
    for (long n = 0;; ++n) {
        Complex ts = Q * (a - b);  // 2i sin
        if (n & 1) th -= ts; else th += ts;
        if (want_d) {
            Complex tc = Q * (a + b) * (2 * n + 1);  // 2 cos
            if (n & 1) thp -= tc; else thp += tc;
        }
        double lt = static_cast<double>(n) * static_cast<double>(n + 1) * lq +
                    static_cast<double>(2 * n + 1) * yx + std::log(2.0 * n + 1.0);
        logmax = std::max(logmax, lt);
        double slope = static_cast<double>(2 * n + 2) * lq + 2.0 * yx;
        if (slope < -std::log(2.0) && lt < logmax - drop) break;
        if (q_cap > 0 && n + 1 >= q_cap) throw PrecisionBudget("theta q-series cap reached");
        if (n > 100000) throw NotConvergent("theta q-series did not converge");
        Q *= qstep;
        qstep *= q2;
        a *= e2;
        b *= e2inv;
    }
    // s was 2i*sin, c was 2*cos
    Complex half_over_i(Real(0), Real(-1) / 2L);  // 1/(2i)
    th *= half_over_i;
    if (want_d) *thp_out = thp / Real(2);
}

double log_abs(const Complex& q) {
    long e = 0;
    double d = mpfr_get_d_2exp(&e, norm(q).get(), MPFR_RNDN);
    return 0.5 * (std::log(d) + static_cast<double>(e) * std::log(2.0));
}

struct Normalized {
    const Lattice& L;
    const PrecisionContext& ctx;
    double lq;

    Normalized(const Lattice& lat, const PrecisionContext& c)
        : L(lat), ctx(c), lq(log_abs(lat.q())) {}

    void eval(const Complex& u, Complex& th, Complex& thp) const {
        Complex x = u * const_pi();
        theta1_series(x, L.q(), lq, ctx.q_terms, th, &thp);
    }

    // sigma(u) * exp(-c u^2/2)
    Complex sigma_twisted(const Complex& u, const Complex& c) const {
        Complex th;
        theta1_series(u * const_pi(), L.q(), lq, ctx.q_terms, th, nullptr);
        const auto& inv = L.invariants();
        Complex u2 = u * u;
        return exp((inv.eta_n1 - c) * u2 / 2L) * th / (inv.theta1p0 * const_pi());
    }

    Complex sigma(const Complex& u) const { return sigma_twisted(u, Complex()); }

    Complex zeta(const Complex& u, const Complex& th, const Complex& thp) const {
        return L.invariants().eta_n1 * u + thp * const_pi() / th;
    }
};

LatticeInvariants calibrate(const Complex& q, int bits) {
    LatticeInvariants inv;
    inv.prec_bits = bits;
    // S1 = sum (-1)^n (2n+1) q^{n(n+1)}, S3 = sum (-1)^n (2n+1)^3 q^{n(n+1)}
    Complex S1, S3, Q(1), step = q * q, q2 = q * q;
    Real eps = ldexp(Real(1), -bits - 8);
    for (long n = 0; n < 100000; ++n) {
        long m = 2 * n + 1;
        Complex t1 = Q * m;
        Complex t3 = Q * (m * m * m);
        if (n & 1) { S1 -= t1; S3 -= t3; } else { S1 += t1; S3 += t3; }
        if (n > 0 && abs(t3) < eps) break;
        Q *= step;
        step *= q2;
    }
    inv.theta1p0 = S1;
    Real pi = const_pi();
    inv.eta_n1 = S3 * (pi * pi) / (S1 * 3L);
    return inv;
}

}  // namespace

// ---------------------------------------------------------------- invariants I/O

std::string LatticeInvariants::serialize() const {
    std::ostringstream os;
    os << "prec_bits=" << prec_bits << "\n";
    os << "theta1p0.re=" << theta1p0.re.to_exact_string() << "\n";
    os << "theta1p0.im=" << theta1p0.im.to_exact_string() << "\n";
    os << "eta_n1.re=" << eta_n1.re.to_exact_string() << "\n";
    os << "eta_n1.im=" << eta_n1.im.to_exact_string() << "\n";
    os << "eta_ntau.re=" << eta_ntau.re.to_exact_string() << "\n";
    os << "eta_ntau.im=" << eta_ntau.im.to_exact_string() << "\n";
    return os.str();
}

LatticeInvariants LatticeInvariants::parse(const std::string& text) {
    LatticeInvariants inv;
    std::istringstream is(text);
    std::string line;
    int seen = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("invariants: bad line '" + line + "'");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "prec_bits") {
            inv.prec_bits = std::stoi(val);
            continue;
        }
        PrecisionGuard g(inv.prec_bits > 0 ? inv.prec_bits : working_precision());
        Real v = Real::from_exact_string(val);
        if (key == "theta1p0.re") inv.theta1p0.re = v;
        else if (key == "theta1p0.im") inv.theta1p0.im = v;
        else if (key == "eta_n1.re") inv.eta_n1.re = v;
        else if (key == "eta_n1.im") inv.eta_n1.im = v;
        else if (key == "eta_ntau.re") inv.eta_ntau.re = v;
        else if (key == "eta_ntau.im") inv.eta_ntau.im = v;
        else throw ParseError("invariants: unknown key '" + key + "'");
        ++seen;
    }
    if (inv.prec_bits <= 0 || seen != 6) throw ParseError("invariants: incomplete record");
    return inv;
}

// ---------------------------------------------------------------- Lattice

Lattice Lattice::from_tau(const Complex& tau, const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    return from_periods(tau, Complex(1), ctx);
}

Lattice Lattice::from_periods(const Complex& omega1, const Complex& omega2,
                              const PrecisionContext& ctx, const LatticeInvariants* cached) {
    ctx.validate();
    PrecisionGuard g(ctx.work_bits());
    Lattice L;
    L.omega1_ = omega1 * Real(1);
    L.omega2_ = omega2 * Real(1);
    Real im12 = im_mul_conj(L.omega1_, L.omega2_);
    if (im12.is_zero()) throw DomainError("periods are R-linearly dependent");
    L.orient_ = im12.sign() > 0 ? 1 : -1;
    Real pi = const_pi();
    L.A_ = abs(im12) / pi;
    if (L.orient_ > 0) {
        L.scale_ = L.omega2_;
        L.tau_ = L.omega1_ / L.omega2_;
    } else {
        L.scale_ = L.omega1_;
        L.tau_ = L.omega2_ / L.omega1_;
    }
    L.An_ = L.tau_.im / pi;
    L.q_ = exp(mul_i(L.tau_) * pi);
    L.q4_ = exp(mul_i(L.tau_) * pi / 4L);

    if (cached) {
        if (cached->prec_bits != ctx.work_bits())
            throw DomainError("cached invariants were computed at a different precision");
        L.inv_ = *cached;
    } else {
        L.inv_ = calibrate(L.q_, ctx.work_bits());
        L.e2n_ = L.inv_.eta_n1 - Complex(Real(1) / L.An_);
        // eta(tau) from the zeta difference at a generic point; Legendre is checked, not used.
        Normalized nz(L, ctx);
        Complex u0(Real(3) / 10L, Real(2) / 10L);
        Complex th0, thp0, th1, thp1;
        nz.eval(u0, th0, thp0);
        Complex u1 = u0 + L.tau_;
        nz.eval(u1, th1, thp1);
        L.inv_.eta_ntau = nz.zeta(u1, th1, thp1) - nz.zeta(u0, th0, thp0);
    }
    L.e2n_ = L.inv_.eta_n1 - Complex(Real(1) / L.An_);
    L.e2star_ = L.e2n_ / (L.scale_ * L.scale_);
    Complex e_one = L.inv_.eta_n1 / L.scale_;
    Complex e_tau = L.inv_.eta_ntau / L.scale_;
    if (L.orient_ > 0) {
        L.eta2_ = e_one;
        L.eta1_ = e_tau;
    } else {
        L.eta1_ = e_one;
        L.eta2_ = e_tau;
    }
    return L;
}

Complex Lattice::point(long m, long n) const { return omega1_ * m + omega2_ * n; }
Complex Lattice::quasi_period(long m, long n) const { return eta1_ * m + eta2_ * n; }

void Lattice::coordinates(const Complex& z, Real& x, Real& y) const {
    x = im_mul_conj(z, omega2_) / im_mul_conj(omega1_, omega2_);
    y = im_mul_conj(z, omega1_) / im_mul_conj(omega2_, omega1_);
}

Real Lattice::distance_to_lattice(const Complex& z) const {
    Real x, y;
    coordinates(z, x, y);
    long m0 = round(x).to_long(), n0 = round(y).to_long();
    Real best;
    bool first = true;
    for (long dm = -1; dm <= 1; ++dm)
        for (long dn = -1; dn <= 1; ++dn) {
            Real d = abs(z - point(m0 + dm, n0 + dn));
            if (first || d < best) { best = d; first = false; }
        }
    return best;
}

bool Lattice::contains(const Complex& z, const Real& tol) const {
    return distance_to_lattice(z) <= tol;
}

Real Lattice::shortest_vector() const {
    Real best;
    bool first = true;
    for (long m = -3; m <= 3; ++m)
        for (long n = -3; n <= 3; ++n) {
            if (m == 0 && n == 0) continue;
            Real d = abs(point(m, n));
            if (first || d < best) { best = d; first = false; }
        }
    return best;
}

std::vector<LatticePoint> lattice_points_in_disk(const Lattice& L, const Complex& shift,
                                                 const Real& radius) {
    Real x0, y0;
    L.coordinates(-shift, x0, y0);
    Real im12 = abs(im_mul_conj(L.omega1(), L.omega2()));
    Real dm = radius * abs(L.omega2()) / im12;
    Real dn = radius * abs(L.omega1()) / im12;
    long m_lo = floor(x0 - dm).to_long() - 1, m_hi = floor(x0 + dm).to_long() + 1;
    long n_lo = floor(y0 - dn).to_long() - 1, n_hi = floor(y0 + dn).to_long() + 1;
    Real r2 = radius * radius;
    std::vector<LatticePoint> pts;
    for (long m = m_lo; m <= m_hi; ++m)
        for (long n = n_lo; n <= n_hi; ++n) {
            Complex x = shift + L.point(m, n);
            Real nx = norm(x);
            if (nx <= r2) pts.push_back({m, n, std::move(x), std::move(nx)});
        }
    std::sort(pts.begin(), pts.end(), [](const LatticePoint& p, const LatticePoint& q) {
        if (p.norm2 != q.norm2) return p.norm2 < q.norm2;
        if (p.m != q.m) return p.m < q.m;
        return p.n < q.n;
    });
    return pts;
}

// ---------------------------------------------------------------- torsion

namespace {
long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}
}  // namespace

TorsionPoint::TorsionPoint(long a, long b, long n) {
    if (n <= 0) throw DomainError("torsion denominator must be positive");
    a = mod(a, n);
    b = mod(b, n);
    long g = std::gcd(std::gcd(a, b), n);
    a_ = a / g;
    b_ = b / g;
    n_ = n / g;
}

Complex TorsionPoint::embed(const Lattice& L) const {
    return (L.omega1() * a_ + L.omega2() * b_) / n_;
}

TorsionPoint TorsionPoint::operator+(const TorsionPoint& o) const {
    long l = std::lcm(n_, o.n_);
    return TorsionPoint(a_ * (l / n_) + o.a_ * (l / o.n_), b_ * (l / n_) + o.b_ * (l / o.n_), l);
}

TorsionPoint TorsionPoint::operator-() const { return TorsionPoint(-a_, -b_, n_); }
TorsionPoint TorsionPoint::times(long m) const { return TorsionPoint(a_ * m, b_ * m, n_); }

std::string TorsionPoint::to_string() const {
    return "(" + std::to_string(a_) + "," + std::to_string(b_) + ")/" + std::to_string(n_);
}

std::vector<TorsionPoint> torsion_points(long N, bool include_zero) {
    std::vector<TorsionPoint> pts;
    for (long a = 0; a < N; ++a)
        for (long b = 0; b < N; ++b) {
            if (!include_zero && a == 0 && b == 0) continue;
            pts.emplace_back(a, b, N);
        }
    return pts;
}

// ---------------------------------------------------------------- pairing

Complex pairing(const Complex& z, const Complex& w, const Lattice& L) {
    // (z conj w - w conj z)/A = 2i Im(z conj w)/A
    return expi(im_mul_conj(z, w) * 2L / L.area_A());
}

namespace {
Complex root_of_unity(long num, long den) {
    num = mod(num, den);
    if (num == 0) return Complex(1);
    return expi(const_pi() * (2 * num) / den);
}
}  // namespace

Complex pairing(const TorsionPoint& x, const TorsionPoint& y, const Lattice& L) {
    long den = x.denominator() * y.denominator();
    long num = x.a() * y.b() - x.b() * y.a();
    return root_of_unity(L.orientation() * num, den);
}

Complex pairing_lattice(long m, long n, const TorsionPoint& t, const Lattice& L) {
    long num = m * t.b() - n * t.a();
    return root_of_unity(L.orientation() * mod(num, t.denominator()), t.denominator());
}

// ---------------------------------------------------------------- theta kernel

void jacobi_theta1_core(const Complex& x, const Lattice& L, const PrecisionContext& ctx,
                        Complex& th, Complex& thp) {
    require_precision(L, ctx);
    PrecisionGuard g(ctx.work_bits());
    theta1_series(x, L.q(), log_abs(L.q()), ctx.q_terms, th, &thp);
}

Complex sigma(const Complex& z, const Lattice& L, const PrecisionContext& ctx) {
    require_precision(L, ctx);
    PrecisionGuard g(ctx.work_bits());
    if (z.is_zero()) return Complex();
    Normalized nz(L, ctx);
    Complex u = z / L.scale();
    return nz.sigma(u) * L.scale();
}

Complex weierstrass_zeta(const Complex& z, const Lattice& L, const PrecisionContext& ctx) {
    require_precision(L, ctx);
    PrecisionGuard g(ctx.work_bits());
    if (L.distance_to_lattice(z) < ldexp(Real(1), -ctx.prec_bits / 2))
        throw PoleError("zeta evaluated at a lattice point");
    Normalized nz(L, ctx);
    Complex u = z / L.scale();
    Complex th, thp;
    nz.eval(u, th, thp);
    return nz.zeta(u, th, thp) / L.scale();
}

Complex theta(const Complex& z, const Lattice& L, const PrecisionContext& ctx) {
    require_precision(L, ctx);
    PrecisionGuard g(ctx.work_bits());
    if (z.is_zero()) return Complex();
    Normalized nz(L, ctx);
    Complex u = z / L.scale();
    return nz.sigma_twisted(u, L.e2star_normalized()) * L.scale();
}

Complex log_derivative_Z(const Complex& z, const Lattice& L, const PrecisionContext& ctx) {
    require_precision(L, ctx);
    PrecisionGuard g(ctx.work_bits());
    if (L.distance_to_lattice(z) < ldexp(Real(1), -ctx.prec_bits / 2))
        throw PoleError("Z evaluated at a lattice point");
    Normalized nz(L, ctx);
    Complex u = z / L.scale();
    Complex th, thp;
    nz.eval(u, th, thp);
    return (nz.zeta(u, th, thp) - L.e2star_normalized() * u) / L.scale();
}

ThetaLawCheck theta_transform_check(long m, long n, const Complex& z, const Lattice& L,
                                    const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    ThetaLawCheck out;
    Complex gam = L.point(m, n);
    Complex lhs = theta(z + gam, L, ctx);
    const Real& A = L.area_A();
    Complex factor = exp((z * conj(gam) + gam * conj(gam) / 2L) / A);
    Complex rhs = factor * theta(z, L, ctx);
    Complex ratio = lhs / rhs;
    out.alpha = ratio.re.sign() >= 0 ? 1 : -1;
    Complex diff = lhs - rhs * static_cast<long>(out.alpha);
    out.defect = abs(diff) / abs(lhs);
    return out;
}

Real legendre_residual(const Lattice& L) {
    PrecisionGuard g(L.prec_bits());
    Complex lhs = L.eta1() * L.omega2() - L.eta2() * L.omega1();
    Complex two_pi_i(Real(0), const_pi() * 2L);
    return abs(lhs + two_pi_i * static_cast<long>(L.orientation()));
}

}  // namespace kron
