#include "kron/ek.hpp"

#include <cmath>
#include <vector>

#include "kron/errors.hpp"
#include "kron/special.hpp"

namespace kron {

std::string to_string(EKMethod m) {
    switch (m) {
        case EKMethod::automatic: return "auto";
        case EKMethod::direct: return "direct";
        case EKMethod::lerch: return "lerch";
        case EKMethod::theta_taylor: return "theta_taylor";
    }
    return "auto";
}

EKMethod parse_method(const std::string& name) {
    if (name == "auto") return EKMethod::automatic;
    if (name == "direct") return EKMethod::direct;
    if (name == "lerch") return EKMethod::lerch;
    if (name == "theta_taylor" || name == "theta-taylor") return EKMethod::theta_taylor;
    throw DomainError("unknown method '" + name + "'");
}

namespace {

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

Complex root(long num, long den) {
    num = mod(num, den);
    if (num == 0) return Complex(1);
    return expi(const_pi() * (2 * num) / den);
}

Complex int_pow(const Complex& z, long n) {
    if (n == 0) return Complex(1);
    return pow(z, n);
}

// ---------------------------------------------------------------- rows scheme

// Polynomials G_j with (d/du)^j cot(pi u) = pi^j G_j(cot pi u).
std::vector<std::vector<Real>> cot_derivative_polys(int jmax) {
    std::vector<std::vector<Real>> G(jmax + 1);
    G[0] = {Real(0), Real(1)};
    for (int j = 0; j < jmax; ++j) {
        const auto& p = G[j];
        // dp/dc
        std::vector<Real> dp(p.size() > 1 ? p.size() - 1 : 1, Real(0));
        for (size_t i = 1; i < p.size(); ++i) dp[i - 1] = p[i] * static_cast<long>(i);
        // -(1 + c^2) dp
        std::vector<Real> q(dp.size() + 2, Real(0));
        for (size_t i = 0; i < dp.size(); ++i) {
            q[i] -= dp[i];
            q[i + 2] -= dp[i];
        }
        G[j + 1] = std::move(q);
    }
    return G;
}

Complex cot_pi(const Complex& u) {
    Complex two_pi_i_u = mul_i(u) * (const_pi() * 2L);
    if (u.im.sign() >= 0) {
        Complex e = exp(two_pi_i_u);
        return mul_i(e + Complex(1)) / (e - Complex(1));
    }
    Complex e = exp(-two_pi_i_u);
    return -mul_i(e + Complex(1)) / (e - Complex(1));
}

Complex horner(const std::vector<Real>& p, const Complex& c) {
    Complex acc;
    for (size_t i = p.size(); i-- > 0;) acc = acc * c + Complex(p[i]);
    return acc;
}

// log of (2 pi)^m/(m-1)! sum_{l>=1} l^{m-1} e^{-2 pi l y}, an upper bound for |P_m(u)|, Im u = y > 0.
long double log_lipschitz_bound(int m, long double y) {
    const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
    long double lead = m * std::log(two_pi) - std::lgamma(static_cast<long double>(m));
    long double first = -two_pi * y;
    long double acc = 0.0L;
    for (long l = 1; l < 100000; ++l) {
        long double lt = (m - 1) * std::log(static_cast<long double>(l)) - two_pi * l * y - first;
        acc += std::exp(lt);
        if (l > (m - 1) / (two_pi * y) + 2 && lt < -80.0L) break;
    }
    return lead + first + std::log(acc);
}

EKValue direct_rows(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                    const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    const int o = L.orientation();
    const Complex& lam = L.scale();
    const Complex& tau = L.tau();
    const long N = s.denominator();
    const long D = t.denominator();
    Real alpha, beta;
    long row_num, inner_c;
    if (o > 0) {
        alpha = Real(s.a()) / N;
        beta = Real(s.b()) / N;
        row_num = o * t.b();
        inner_c = -o * t.a();
    } else {
        alpha = Real(s.b()) / N;
        beta = Real(s.a()) / N;
        row_num = -o * t.a();
        inner_c = o * t.b();
    }

    const Real pi = const_pi();
    const auto G = cot_derivative_polys(r - 1);
    // P_m(u) = sum_q (u+q)^{-m} = (-1)^{m-1}/(m-1)! pi^m G_{m-1}(cot pi u)
    std::vector<Real> pref(r + 1);
    for (int m = 1; m <= r; ++m) {
        pref[m] = pow(pi, static_cast<long>(m)) / factorial(m - 1);
        if ((m - 1) % 2) pref[m] = -pref[m];
    }
    std::vector<Real> zeta_excl(r + 1);
    for (int m = 2; m <= r; ++m) {
        if (m % 2 == 0) {
            mpfr_zeta_ui(zeta_excl[m].get(), m, MPFR_RNDN);
            zeta_excl[m] *= 2L;
        }
    }
    std::vector<Complex> chi(D);
    std::vector<Real> Dpow(r + 1);
    for (long rho = 0; rho < D; ++rho) chi[rho] = root(inner_c * rho, D);
    for (int m = 0; m <= r; ++m) Dpow[m] = pow(Real(D), static_cast<long>(-m));
    std::vector<Real> binom(k + 1);
    for (int i = 0; i <= k; ++i) binom[i] = binomial(k, i);

    auto row_sum = [&](long j) {
        Complex y = tau * (alpha + Real(j)) + Complex(beta);
        Complex ybar_minus_y(Real(0), -(y.im * 2L));
        std::vector<Complex> Lm(r + 1);
        for (long rho = 0; rho < D; ++rho) {
            bool excluded = s.is_zero() && j == 0 && rho == 0;
            Complex u = (y + Complex(rho)) / Real(D);
            Complex c;
            if (!excluded) c = cot_pi(u);
            for (int i = 0; i <= k; ++i) {
                int m = r - i;
                Complex P = excluded ? Complex(zeta_excl[m]) : pref[m] * horner(G[m - 1], c);
                Lm[m] += chi[rho] * P * Dpow[m];
            }
        }
        Complex R;
        for (int i = 0; i <= k; ++i) R += binom[i] * int_pow(ybar_minus_y, k - i) * Lm[r - i];
        return R * root(row_num * j, D);
    };

    const long double im_tau = static_cast<long double>(tau.im.to_double());
    const long double a0 = static_cast<long double>(alpha.to_double());
    auto log_row_bound = [&](long j) {
        long double Y = std::fabs(a0 + j) * im_tau;
        long double best = -INFINITY;
        for (int i = 0; i <= k; ++i) {
            int m = r - i;
            long double lt = std::log(static_cast<long double>(binom[i].to_double())) +
                             (k - i) * std::log(2.0L * Y) + std::log(static_cast<long double>(D)) -
                             m * std::log(static_cast<long double>(D)) +
                             log_lipschitz_bound(m, Y / D);
            best = std::max(best, lt) + std::log1p(std::exp(-std::fabs(best - lt)));
        }
        return best;
    };
    auto log_tail = [&](long J) {
        // rows with |j| > J on both sides
        long double acc = -INFINITY;
        for (int side : {1, -1}) {
            long double first = log_row_bound(side * (J + 1));
            for (long j = J + 1;; ++j) {
                long double lb = log_row_bound(side * j);
                acc = std::max(acc, lb) + std::log1p(std::exp(-std::fabs(acc - lb)));
                if (lb < first - 60.0L) break;
            }
        }
        return acc;
    };

    Complex total = row_sum(0);
    Real scale = abs(total);
    const long double target = -static_cast<long double>(ctx.work_bits()) * std::log(2.0L);
    long J = 0;
    long double lt = 0;
    for (;;) {
        if (J >= 1) {
            lt = log_tail(J);
            long double ls = std::log(static_cast<long double>(max(scale, Real(1e-300)).to_double()));
            if (lt < target + ls) break;
        }
        ++J;
        if (J > 1000000) throw PrecisionBudget("row sum did not reach the tail bound");
        for (long j : {J, -J}) {
            Complex Rj = row_sum(j);
            total += Rj;
            scale = max(scale, abs(Rj));
        }
    }
    EKValue out;
    out.value = int_pow(conj(lam), k) * total / int_pow(lam, r);
    out.method = EKMethod::direct;
    Real lam_fac = pow(abs(lam), static_cast<long>(k - r));
    out.est_error = (Real(static_cast<double>(std::exp(lt))) + ldexp(scale, -ctx.prec_bits)) * lam_fac;
    return out;
}

// ---------------------------------------------------------------- shells scheme

EKValue direct_shells(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                      const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    const Complex s0 = s.embed(L);
    const Real& A = L.area_A();
    const Real d = abs(L.omega1()) + abs(L.omega2());
    const Real tol(ctx.tol());
    auto pts = lattice_points_in_disk(L, s0, Real(ctx.sum_radius));
    Complex sum;
    size_t idx = 0;
    for (long R = 1; R <= ctx.sum_radius; ++R) {
        Real R2 = Real(R) * Real(R);
        for (; idx < pts.size() && pts[idx].norm2 <= R2; ++idx) {
            const auto& p = pts[idx];
            if (s.is_zero() && p.m == 0 && p.n == 0) continue;
            Complex term = int_pow(conj(p.x), k) / int_pow(p.x, r);
            sum += term * pairing_lattice(p.m, p.n, t, L);
        }
        Real Rd = Real(R) - d;
        if (Rd.sign() <= 0) continue;
        Real tail = pow(Rd, static_cast<long>(k - r + 2)) * 2L / (A * static_cast<long>(r - k - 2));
        if (tail <= tol * abs(sum)) {
            EKValue out;
            out.value = sum;
            out.method = EKMethod::direct;
            out.est_error = tail;
            return out;
        }
    }
    throw PrecisionBudget("shell sum tail bound exceeds tolerance within sum_radius " +
                          std::to_string(ctx.sum_radius));
}

// ---------------------------------------------------------------- Lerch continuation

struct Chars {
    const TorsionPoint* zt = nullptr;
    const TorsionPoint* wt = nullptr;
};

// Gamma(s, X) X^{-s}
Complex gamma_ratio(const Complex& s, const Real& X) {
    if (auto n = as_integer(s)) {
        if (*n >= 1) {
            // (n-1)! e^{-X} sum_{j<n} X^{j-n}/j!
            Real term = Real(1) / X;  // j = n-1 term times (n-1)!/(n-1)!
            Real sum = term;
            for (long j = *n - 1; j >= 1; --j) {
                term = term * j / X;
                sum += term;
            }
            return Complex(sum * exp(-X));
        }
    }
    return upper_gamma(s, X) * exp(-s * Complex(log(X)));
}

Complex lerch_core(int a, const Complex& z, const Complex& w, const Complex& s, const Lattice& L,
                   const PrecisionContext& ctx, Chars ch, Real* err = nullptr) {
    if (a < 0) throw DomainError("K* needs a >= 0");
    PrecisionGuard g(ctx.work_bits());
    const Real tiny = ldexp(Real(1), -ctx.prec_bits / 2);
    const bool z_in = ch.zt ? ch.zt->is_zero() : L.distance_to_lattice(z) < tiny;
    const bool w_in = ch.wt ? ch.wt->is_zero() : L.distance_to_lattice(w) < tiny;
    const Complex one(1);
    if (a == 0 && w_in && abs(s - one) < tiny)
        throw PoleError("K*_0(z, 0, s) has a pole at s = 1");
    const Real& A = L.area_A();

    double sabs = abs(s).to_double();
    double bits_ln = ctx.work_bits() * std::log(2.0);
    double X = bits_ln + 10.0;
    for (int it = 0; it < 8; ++it) X = bits_ln + (a / 2.0 + sabs + 2.0) * std::log(X) + 10.0;
    Real radius = sqrt(Real(X) * A);

    Real mass;  // sum of |terms|, for the rounding estimate
    auto dual_sum = [&](const Complex& center, const Complex& sp, bool center_in,
                        const Complex& other, const TorsionPoint* ot) {
        Complex acc;
        for (const auto& p : lattice_points_in_disk(L, center, radius)) {
            if (center_in && p.norm2 < tiny * tiny) continue;
            Complex chi = ot ? pairing_lattice(p.m, p.n, *ot, L) : pairing(L.point(p.m, p.n), other, L);
            Complex term = int_pow(conj(p.x), a) * chi * gamma_ratio(sp, p.norm2 / A);
            mass += abs(term);
            acc += term;
        }
        return acc;
    };

    Complex phase = (ch.zt && ch.wt) ? pairing(*ch.wt, *ch.zt, L) : pairing(w, z, L);
    Complex sum1 = dual_sum(z, s, z_in, w, ch.wt);
    Complex sum2 = dual_sum(w, Complex(a + 1) - s, w_in, z, ch.zt);
    Complex bracket = sum1 + phase * sum2;
    if (a == 0 && w_in) bracket += one / (s - one);
    Complex res = rgamma(s) * bracket;
    if (a == 0 && z_in) res -= phase * rgamma(s + one);
    Complex Apow = as_integer(s) ? Complex(pow(A, -as_integer(s).value()))
                                 : exp(-s * Complex(log(A)));
    if (err) *err = ldexp((mass + Real(1)) * abs(rgamma(s) * Apow), -ctx.prec_bits);
    return res * Apow;
}

Real normalization(int k, int r, const Lattice& L) {
    // (-1)^{k+r} r!/A^k for e~_{k,r+1}
    Real c = factorial(r) / pow(L.area_A(), static_cast<long>(k));
    return (k + r) % 2 ? -c : c;
}

}  // namespace

EKValue ek_direct(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                  const PrecisionContext& ctx, DirectScheme scheme) {
    ctx.validate();
    if (k < 0 || r < 0) throw DomainError("k and r must be nonnegative");
    if (r <= k + 2) throw NotConvergent("direct sum needs r > k + 2");
    if (ctx.work_bits() > L.prec_bits()) throw DomainError("lattice precision below request");
    EKValue v = scheme == DirectScheme::rows ? direct_rows(k, r, s, t, L, ctx)
                                             : direct_shells(k, r, s, t, L, ctx);
    PrecisionGuard g(ctx.prec_bits);
    v.value = v.value * Real(1);
    return v;
}

Complex lerch_Kstar(int a, const Complex& z, const Complex& w, const Complex& s, const Lattice& L,
                    const PrecisionContext& ctx) {
    ctx.validate();
    Complex v = lerch_core(a, z, w, s, L, ctx, {});
    PrecisionGuard g(ctx.prec_bits);
    return v * Real(1);
}

Complex lerch_Kstar(int a, const TorsionPoint& z, const TorsionPoint& w, const Complex& s,
                    const Lattice& L, const PrecisionContext& ctx) {
    ctx.validate();
    Complex v;
    {
        PrecisionGuard g(ctx.work_bits());
        v = lerch_core(a, z.embed(L), w.embed(L), s, L, ctx, {&z, &w});
    }
    PrecisionGuard g(ctx.prec_bits);
    return v * Real(1);
}

EKValue ek_star(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                const PrecisionContext& ctx, EKMethod method) {
    if (k < 0 || r < 1) throw DomainError("e*_{k,r} needs k >= 0, r >= 1");
    if (method == EKMethod::automatic) method = r > k + 2 ? EKMethod::direct : EKMethod::lerch;
    if (method == EKMethod::direct) return ek_direct(k, r, s, t, L, ctx);
    EKValue n = ek_normalized(k, r - 1, s, t, L, ctx, method);
    PrecisionGuard g(ctx.work_bits());
    Real c = normalization(k, r - 1, L);
    EKValue out;
    out.value = n.value / c;
    out.method = n.method;
    out.est_error = n.est_error / abs(c);
    PrecisionGuard back(ctx.prec_bits);
    out.value = out.value * Real(1);
    return out;
}

EKValue ek_normalized(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                      const PrecisionContext& ctx, EKMethod method) {
    ctx.validate();
    if (k < 0 || r < 0) throw DomainError("k and r must be nonnegative");
    if (method == EKMethod::automatic) method = r + 1 > k + 2 ? EKMethod::direct : EKMethod::lerch;
    EKValue out;
    out.method = method;
    {
        PrecisionGuard g(ctx.work_bits());
        Real c = normalization(k, r, L);
        switch (method) {
            case EKMethod::direct: {
                EKValue d = ek_direct(k, r + 1, s, t, L, ctx);
                out.value = d.value * c;
                out.est_error = d.est_error * abs(c);
                break;
            }
            case EKMethod::lerch: {
                Real err;
                Complex K = lerch_core(k + r + 1, s.embed(L), t.embed(L), Complex(r + 1), L, ctx,
                                       {&s, &t}, &err);
                out.value = K * c;
                out.est_error = err * abs(c);
                break;
            }
            case EKMethod::theta_taylor: {
                if (s.is_zero() || t.is_zero())
                    throw ContourTooLarge("theta_taylor route needs s and t off the lattice");
                auto grid = taylor_coeffs(ThetaTranslate::from_torsion(s, t, L), k, r, ctx);
                out.value = grid.c[k][r] * (factorial(k) * factorial(r));
                out.est_error = grid.est_error * abs(out.value);
                break;
            }
            case EKMethod::automatic: break;
        }
    }
    PrecisionGuard g(ctx.prec_bits);
    out.value = out.value * Real(1);
    return out;
}

}  // namespace kron
