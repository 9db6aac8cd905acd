#include "kron/suites.hpp"

#include <chrono>
#include <functional>

#include "kron/ek.hpp"
#include "kron/errors.hpp"
#include "kron/kato_siegel.hpp"
#include "kron/kronecker_theta.hpp"
#include "kron/nhmf.hpp"
#include "kron/padic.hpp"

namespace kron {

namespace {

double rel_defect(const Complex& a, const Complex& b) {
    Real m = max(abs(a), abs(b));
    Real d = abs(a - b);
    return (m.is_zero() ? d : d / m).to_double();
}

double abs_defect(const Complex& a, const Complex& b) { return abs(a - b).to_double(); }

std::string tp(const TorsionPoint& t) {
    long n = t.denominator();
    return std::to_string(t.a()) + "/" + std::to_string(n) + "," + std::to_string(t.b()) + "/" +
           std::to_string(n);
}

Complex cplx(double re, double im) { return Complex(Real(re), Real(im)); }

// Runs `body`, turning engine failures into a failed check with a note.
CheckResult make_check(const std::string& name, const std::string& anchor, const std::string& inputs,
                       double threshold, const std::function<double()>& body) {
    CheckResult c;
    c.name = name;
    c.anchor = anchor;
    c.inputs = inputs;
    c.threshold = threshold;
    try {
        c.defect = body();
        c.passed = c.defect <= threshold;
    } catch (const Error& e) {
        c.passed = false;
        c.defect = -1.0;
        c.note = e.what();
    }
    return c;
}

void theta_suite(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    for (const auto& [label, L] : S.lattices) {
        PrecisionGuard g(ctx.work_bits());
        rep.checks.push_back(make_check(
            "theta_law", "theta(z+g) = alpha(g) exp(z conj(g)/A + g conj(g)/(2A)) theta(z)",
            "tau=" + label + " 4 periods x 5 points", 1e-30, [&] {
                const long gs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-2, 1}};
                double worst = 0;
                for (const auto& gm : gs)
                    for (int i = 0; i < 5; ++i) {
                        Complex z = L.omega1() * Real(0.11 + 0.13 * i) + L.omega2() * Real(0.37 - 0.09 * i);
                        auto r = theta_transform_check(gm[0], gm[1], z, L, ctx);
                        int want = ((gm[0] + gm[1] + gm[0] * gm[1]) % 2 == 0) ? 1 : -1;
                        if (r.alpha != want) return 1.0;
                        worst = std::max(worst, r.defect.to_double());
                    }
                return worst;
            }));
        rep.checks.push_back(make_check("legendre", "eta1 w2 - eta2 w1 = -2 pi i (positive orientation)",
                                        "tau=" + label, 1e-35,
                                        [&] { return legendre_residual(L).to_double(); }));
        rep.checks.push_back(make_check(
            "theta_prime_zero", "theta'(0) = 1", "tau=" + label + " contour radius 0.1", 1e-30, [&] {
                auto f = [&](const Complex& z) { return theta(z, L, ctx) / (z * z); };
                return abs_defect(contour_residue(f, Complex(), Real(0.1), ctx), Complex(Real(1)));
            }));
    }
}

void laurent_suite(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    const std::pair<TorsionPoint, TorsionPoint> pairs[] = {
        {TorsionPoint(1, 2, 5), TorsionPoint(2, 1, 3)},
        {TorsionPoint(3, 1, 7), TorsionPoint(1, 3, 4)},
    };
    for (const auto& [label, L] : S.lattices)
        for (const auto& [s, t] : pairs) {
            PrecisionGuard g(ctx.work_bits());
            rep.checks.push_back(make_check(
                "laurent_grid", "Theta_{s,t}(z,w) = sum_{a,b} e~_{a,b+1}(s,t) z^b w^a / (a! b!)",
                "tau=" + label + " s=" + tp(s) + " t=" + tp(t) + " a,b<=4", 1e-25, [&] {
                    auto grid = taylor_coeffs(ThetaTranslate::from_torsion(s, t, L), 4, 4, ctx);
                    double worst = 0;
                    for (int a = 0; a <= 4; ++a)
                        for (int b = 0; b <= 4; ++b) {
                            Complex lhs = grid.c[a][b] * (factorial(a) * factorial(b));
                            Complex rhs = ek_normalized(a, b, s, t, L, ctx).value;
                            worst = std::max(worst, rel_defect(lhs, rhs));
                        }
                    return worst;
                }));
        }
}

void overlap_suite(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    const std::pair<TorsionPoint, TorsionPoint> pairs[] = {
        {TorsionPoint(1, 2, 5), TorsionPoint(2, 1, 3)},
        {TorsionPoint(1, 3, 7), TorsionPoint()},
    };
    for (const auto& [label, L] : S.lattices)
        for (const auto& [s, t] : pairs) {
            PrecisionGuard g(ctx.work_bits());
            for (int k = 0; k <= 2; ++k)
                for (int r : {k + 3, k + 4, k + 6}) {
                    rep.checks.push_back(make_check(
                        "direct_vs_lerch",
                        "sum_{g} conj(s+g)^k (s+g)^{-r} <g,t> = K*_{k+r}(s,t,r)",
                        "tau=" + label + " s=" + tp(s) + " t=" + tp(t) + " k=" + std::to_string(k) +
                            " r=" + std::to_string(r),
                        1e-25, [&] {
                            auto d = ek_star(k, r, s, t, L, ctx, EKMethod::direct);
                            auto l = ek_star(k, r, s, t, L, ctx, EKMethod::lerch);
                            return rel_defect(d.value, l.value);
                        }));
                }
            for (int k = 0; k <= 2; ++k) {
                int r = k + 20;
                rep.checks.push_back(make_check(
                    "shells_vs_lerch", "partial sum over |s+g| <= R plus tail bound = K*_{k+r}(s,t,r)",
                    "tau=" + label + " s=" + tp(s) + " t=" + tp(t) + " k=" + std::to_string(k) +
                        " r=" + std::to_string(r),
                    1e-25, [&] {
                        auto c = ctx;
                        c.tol_rel = 1e-27;
                        auto d = ek_direct(k, r, s, t, L, c, DirectScheme::shells);
                        auto l = ek_star(k, r, s, t, L, ctx, EKMethod::lerch);
                        return rel_defect(d.value, l.value);
                    }));
            }
        }
}

void functional_suite(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    const TorsionPoint xs[] = {TorsionPoint(2, 1, 5), TorsionPoint(1, 3, 4)};
    for (const auto& [label, L] : S.lattices)
        for (const auto& x : xs) {
            PrecisionGuard g(ctx.work_bits());
            rep.checks.push_back(make_check(
                "functional_equation",
                "e~_{k,r+1}(x,0) = (-1)^{k+r} k! K*_{k+r+1}(0,x,k+1) / A^r",
                "tau=" + label + " x=" + tp(x) + " k,r<=3", 1e-25, [&] {
                    const Real& A = L.area_A();
                    TorsionPoint zero;
                    double worst = 0;
                    for (int k = 0; k <= 3; ++k)
                        for (int r = 0; r <= 3; ++r) {
                            Complex lhs = ek_normalized(k, r, x, zero, L, ctx).value;
                            Complex rhs = lerch_Kstar(k + r + 1, zero, x, Complex(Real(k + 1)), L, ctx) *
                                          factorial(k) / pow(A, static_cast<long>(r));
                            if ((k + r) % 2) rhs = -rhs;
                            worst = std::max(worst, rel_defect(lhs, rhs));
                        }
                    return worst;
                }));
        }
}

void katz_suite(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    const std::pair<int, int> krs[] = {{1, 1}, {2, 1}, {1, 2}};
    for (const auto& [label, L] : S.lattices)
        for (long D : {2L, 3L})
            for (const auto& [k, r] : krs) {
                PrecisionGuard g(ctx.work_bits());
                rep.checks.push_back(make_check(
                    "katz_comparison",
                    "sum_{t != 0} e~_{k,r+1}(Ds,Nt) = D^{k-r+1} e~_{k,r+1}(s,0) - e~_{k,r+1}(Ds,0)",
                    "tau=" + label + " s=1/5,2/5 N=5 D=" + std::to_string(D) + " k=" +
                        std::to_string(k) + " r=" + std::to_string(r),
                    1e-20, [&] { return katz_comparison_check(k, r, 1, 2, 5, D, L, ctx).defect.to_double(); }));
            }
}

void kato_siegel_suite(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    for (const auto& [label, L] : S.lattices) {
        PrecisionGuard g(ctx.work_bits());
        for (long D : {2L, 3L, 4L})
            rep.checks.push_back(make_check(
                "residue_law", "Res omega^D = D^2 [0] - [E[D]]; residues sum to 0",
                "tau=" + label + " D=" + std::to_string(D), 1e-20, [&] {
                    auto table = residue_table(KSDifferential::summed(D, L), ctx);
                    double worst = 0;
                    Complex total;
                    for (const auto& e : table) {
                        worst = std::max(worst, abs_defect(e.residue, e.expected));
                        total += e.residue;
                    }
                    return std::max(worst, abs(total).to_double());
                }));
        for (long D : {3L, 6L}) {
            TorsionPoint t(1, D - 1, D);
            rep.checks.push_back(make_check(
                "translation_character", "omega_t(z + u) = <t, D u> omega_t(z), u in E[D]",
                "tau=" + label + " D=" + std::to_string(D) + " t=" + tp(t) + " 5 points", 1e-20, [&] {
                    double worst = 0;
                    for (const auto& u : torsion_points(D, false)) {
                        Complex want = pairing(t.embed(L), u.embed(L) * Real(D), L);
                        for (int i = 0; i < 5; ++i) {
                            Complex z = L.omega1() * Real(0.07 + 0.031 * i) +
                                        L.omega2() * Real(0.043 - 0.017 * i);
                            Complex ratio = omega_t(z + u.embed(L), t, D, L, ctx) / omega_t(z, t, D, L, ctx);
                            worst = std::max(worst, abs_defect(ratio, want));
                        }
                    }
                    return worst;
                }));
        }
        for (auto [D, N] : {std::pair<long, long>{2, 3}, {3, 2}, {2, 5}})
            rep.checks.push_back(make_check(
                "trace", "(1/N) sum_{Nw = z} omega^D(w) = omega^D(z)",
                "tau=" + label + " D=" + std::to_string(D) + " N=" + std::to_string(N), 1e-20,
                [&] { return trace_check(D, N, cplx(0.31, 0.12), L, ctx).to_double(); }));
        for (long D : {2L, 3L, 4L, 6L}) {
            int npts = D == 6 ? 3 : 10;
            rep.checks.push_back(make_check(
                "closed_form", "sum_{t != 0} omega_t(z) = D^2 Z(z) - D Z(Dz)",
                "tau=" + label + " D=" + std::to_string(D) + " " + std::to_string(npts) + " points",
                1e-20, [&] {
                    double worst = 0;
                    for (int i = 0; i < npts; ++i) {
                        Complex z = L.omega1() * Real(0.137 + 0.0731 * i) + L.omega2() * Real(0.211 - 0.0517 * i);
                        worst = std::max(worst, rel_defect(omega_D(z, D, L, ctx), omega_D_closed(z, D, L, ctx)));
                    }
                    return worst;
                }));
        }
        rep.checks.push_back(make_check(
            "residues_D6", "Res omega^6 = 36 [0] - [E[6]] at sampled torsion points",
            "tau=" + label + " points 0, 1/2, (1+tau)/3, (5tau+2)/6", 1e-20, [&] {
                auto form = KSDifferential::summed(6, L);
                Real rad = residue_radius(6, L);
                auto f = [&](const Complex& z) { return omega_D_closed(z, 6, L, ctx); };
                double worst = 0;
                for (auto p : {TorsionPoint(0, 0, 1), TorsionPoint(0, 1, 2), TorsionPoint(1, 1, 3),
                               TorsionPoint(5, 2, 6)})
                    worst = std::max(worst, abs_defect(contour_residue(f, p.embed(L), rad, ctx),
                                                       form.expected_residue(p)));
                return worst;
            }));
    }
}

void distribution_suite_run(const SuiteSettings& S, SuiteReport& rep) {
    const auto& ctx = S.ctx;
    struct Case {
        long D, Dp, N, M;
        TorsionPoint s, t;
    };
    const Case cases[] = {
        {3, 2, 5, 5, TorsionPoint(1, 2, 5), TorsionPoint(2, 1, 3)},
        {5, 3, 2, 1, TorsionPoint(1, 1, 2), TorsionPoint(3, 4, 5)},
    };
    for (const auto& [label, L] : S.lattices)
        for (const auto& c : cases) {
            PrecisionGuard g(ctx.work_bits());
            DistributionOptions opt;
            opt.psi_degree = c.M;
            std::string inputs = "tau=" + label + " D=" + std::to_string(c.D) + " D'=" +
                                 std::to_string(c.Dp) + " N=" + std::to_string(c.N) + " M=" +
                                 std::to_string(c.M) + " s=" + tp(c.s) + " t=" + tp(c.t) + " 5 points";
            DistributionReport dr;
            std::string failure;
            try {
                dr = distribution_suite(c.D, c.Dp, c.N, c.s, c.t, L, ctx, opt);
            } catch (const Error& e) {
                failure = e.what();
            }
            if (!failure.empty()) {
                CheckResult cr;
                cr.name = "distribution";
                cr.inputs = inputs;
                cr.threshold = 1e-18;
                cr.defect = -1.0;
                cr.note = failure;
                rep.checks.push_back(cr);
                continue;
            }
            for (const auto& it : dr.items) {
                CheckResult cr;
                cr.name = it.name;
                cr.anchor = it.formula;
                cr.inputs = inputs;
                cr.threshold = 1e-18;
                cr.applicable = it.applicable;
                if (!it.applicable) {
                    cr.passed = true;
                    cr.note = "not applicable: " + it.reason;
                } else {
                    cr.defect = it.max_defect.to_double();
                    cr.passed = cr.defect <= cr.threshold && it.samples == 5;
                }
                rep.checks.push_back(cr);
            }
        }
}

struct Lcg {
    unsigned long long s;
    Residue next(Residue m) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<Residue>((s >> 33) % static_cast<unsigned long long>(m));
    }
};

TruncatedSeries2 sample_series(const PadicRing& R, int dS, int dT, unsigned long long seed) {
    Lcg g{seed};
    TruncatedSeries2 f(R, dS, dT);
    for (int i = 0; i <= dS; ++i)
        for (int j = 0; j <= dT; ++j) f.set(i, j, g.next(R.modulus));
    return f;
}

Residue powmod(Residue b, int e, const PadicRing& R) {
    Residue r = 1;
    for (int i = 0; i < e; ++i) r = R.mul(r, b);
    return r;
}

void padic_suite(SuiteReport& rep) {
    const PadicRing R(5, 6);
    const std::string ring = "p=5 M=6";
    auto f = sample_series(R, 12, 3, 20240611);
    rep.checks.push_back(make_check(
        "moment_riemann", "int x^k y^l dmu = d_S^k d_T^l f(0,0) = sum_a a^k mu_l(a + p^3 Z_p) mod p^3",
        ring + " deg 12x3 k<=4 l<=2", 0.0, [&] {
            PadicRing R3(5, 3);
            std::vector<TruncatedSeries2> cls;
            for (long a = 0; a < 125; ++a) cls.push_back(measure_eval(f, 3, a, Var::S));
            int bad = 0;
            for (int k = 0; k <= 4; ++k)
                for (int l = 0; l <= 2; ++l) {
                    Residue sum = 0;
                    for (long a = 0; a < 125; ++a)
                        sum = R3.add(sum, R3.mul(powmod(a, k, R3), moment(cls[a], 0, l)));
                    if (sum != R3.reduce(moment(f, k, l))) ++bad;
                }
            return static_cast<double>(bad);
        }));
    rep.checks.push_back(make_check(
        "restrict_idempotent", "res(res(f)) = res(f), res(f) = f - (1/p) sum_zeta f((1+S)zeta - 1, T)",
        ring + " deg 12x3", 0.0, [&] {
            auto r = restrict_unit_S(f);
            return restrict_unit_S(r).congruent(r) ? 0.0 : 1.0;
        }));
    rep.checks.push_back(make_check(
        "restrict_complement", "f = res(f) + p-part, p-part has no mass on unit classes",
        ring + " deg 12x3 level 2", 0.0, [&] {
            auto r = restrict_unit_S(f);
            auto part = p_part_S(f);
            int bad = (r + part).congruent(f) ? 0 : 1;
            for (long a = 1; a < 25; ++a)
                if (a % 5 != 0 &&
                    !measure_eval(part, 2, a, Var::S).congruent(TruncatedSeries2::constant(R, 0)))
                    ++bad;
            return static_cast<double>(bad);
        }));
    rep.checks.push_back(make_check(
        "pushforward_law", "int (px)^k y^l dmu = p^k int x^k y^l dmu, g = f((1+S)^p - 1, T)",
        ring + " deg 12x3 k,l<=3", 0.0, [&] {
            auto mf = moments(f, 3, 3), mg = moments(pushforward_p(f), 3, 3);
            int bad = 0;
            for (int k = 0; k <= 3; ++k)
                for (int l = 0; l <= 3; ++l)
                    if (mg.m[k][l] != R.mul(powmod(5, k, R), mf.m[k][l])) ++bad;
            return static_cast<double>(bad);
        }));
    rep.checks.push_back(make_check(
        "kummer_measure", "m_k = m_k' mod p^{v+1} for k = k' mod (p-1)p^v on Z_p^x",
        ring + " restricted deg 12x3 moments K=12 L=2 and Dirac at 7", 0.0, [&] {
            auto a = kummer_check(moments(restrict_unit_S(f), 12, 2));
            auto b = kummer_check(moments(TruncatedSeries2::dirac(R, 7, 3), 24, 1));
            return static_cast<double>(a.violations.size() + b.violations.size());
        }));
    rep.checks.push_back(make_check(
        "kummer_adversarial", "m_k = k violates m_1 = m_5 mod p", ring + " K=8", 0.0, [&] {
            MeasureMoments bad;
            bad.p = 5;
            bad.prec = 6;
            for (int k = 0; k <= 8; ++k) bad.m.push_back({k});
            auto rb = kummer_check(bad);
            for (const auto& v : rb.violations)
                if (v.kind == "kummer" && v.k == 1 && v.k2 == 5) return 0.0;
            return 1.0;
        }));
}

}  // namespace

bool SuiteReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

SuiteSettings default_suite_settings(const PrecisionContext& ctx) {
    SuiteSettings s;
    s.ctx = ctx;
    PrecisionGuard g(ctx.work_bits() + 64);
    Complex rho(Real(1) / Real(2), sqrt(Real(3)) / Real(2));
    s.lattices.emplace_back("i", Lattice::from_tau(Complex(Real(0), Real(1)), ctx));
    s.lattices.emplace_back("(1+i*sqrt(3))/2", Lattice::from_tau(rho, ctx));
    return s;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"theta",  "laurent",     "overlap",
                                                   "functional-eq", "katz", "kato-siegel",
                                                   "distribution", "padic"};
    return names;
}

bool is_suite(const std::string& name) {
    if (name == "all") return true;
    for (const auto& n : suite_names())
        if (n == name) return true;
    return false;
}

SuiteReport run_suite(const std::string& name, const SuiteSettings& settings) {
    if (!is_suite(name) || name == "all") throw DomainError("unknown suite '" + name + "'");
    SuiteReport rep;
    rep.name = name;
    auto t0 = std::chrono::steady_clock::now();
    if (name == "theta") theta_suite(settings, rep);
    else if (name == "laurent") laurent_suite(settings, rep);
    else if (name == "overlap") overlap_suite(settings, rep);
    else if (name == "functional-eq") functional_suite(settings, rep);
    else if (name == "katz") katz_suite(settings, rep);
    else if (name == "kato-siegel") kato_siegel_suite(settings, rep);
    else if (name == "distribution") distribution_suite_run(settings, rep);
    else padic_suite(rep);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace kron
