#include "kron/kato_siegel.hpp"

#include <numeric>

#include "kron/errors.hpp"
#include "kron/parallel.hpp"

namespace kron {

namespace {

void require_torsion(const TorsionPoint& t, long D) {
    if (D < 1) throw DomainError("isogeny degree must be positive");
    if (D % t.order() != 0)
        throw DomainError("torsion point " + t.to_string() + " is not killed by " +
                          std::to_string(D));
}

Complex sum_ordered(const std::vector<Complex>& v) {
    Complex s;
    for (const auto& x : v) s += x;
    return s;
}

Real rel_defect(const Complex& a, const Complex& b) {
    Real m = max(abs(a), abs(b));
    Real d = abs(a - b);
    return m.is_zero() ? d : d / m;
}

// splitmix64 step; the sampler must not depend on the standard library's distributions
struct Sampler {
    std::uint64_t state;
    double next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    Complex point(const Lattice& L) {
        double x = next() - 0.5, y = next() - 0.5;
        return L.omega1() * Real(x) + L.omega2() * Real(y);
    }
};

struct NearPole {};

class Guard {
public:
    explicit Guard(const Lattice& L) : L_(L), sep_(L.shortest_vector() * Real(1e-3)) {}
    void check(const Complex& x) const {
        if (L_.distance_to_lattice(x) < sep_) throw NearPole{};
    }

private:
    const Lattice& L_;
    Real sep_;
};

Complex translate(const Guard& guard, const Complex& z0, const Complex& w0, const Complex& z,
                  const Complex& w, const Lattice& L, const PrecisionContext& ctx) {
    guard.check(z + z0);
    guard.check(w + w0);
    return translated_theta(ThetaTranslate{z0, w0, L}, z, w, ctx);
}

using Sides = std::pair<Complex, Complex>;

IdentityDefect run_identity(IdentityDefect item, const std::function<Sides(const Complex&,
                                                                           const Complex&)>& sides,
                            const Lattice& L, const DistributionOptions& opt, std::uint64_t salt) {
    Sampler rng{opt.seed ^ salt};
    item.max_defect = Real(0);
    int attempts = 0;
    while (item.samples < opt.samples) {
        if (++attempts > 20 * opt.samples + 20)
            throw PoleError(item.name + ": sampled points keep hitting poles");
        Complex z = rng.point(L), w = rng.point(L);
        Sides v;
        try {
            v = sides(z, w);
        } catch (const NearPole&) {
            continue;
        } catch (const PoleError&) {
            continue;
        }
        Real d = rel_defect(v.first, v.second);
        if (d > item.max_defect) item.max_defect = d;
        ++item.samples;
    }
    return item;
}

}  // namespace

Complex omega_t(const Complex& z, const TorsionPoint& t, long D, const Lattice& L,
                const PrecisionContext& ctx) {
    require_torsion(t, D);
    if (t.is_zero()) throw DomainError("omega_t needs a nonzero torsion point");
    PrecisionGuard g(ctx.work_bits());
    Complex tv = t.embed(L);
    Complex Dz = z * Real(D);
    return exp(-(Dz * conj(tv)) / L.area_A()) * kronecker_theta(Dz, tv, L, ctx) * Real(D);
}

Complex omega_D(const Complex& z, long D, const Lattice& L, const PrecisionContext& ctx) {
    if (D < 2) throw DomainError("omega^D needs D >= 2");
    PrecisionGuard g(ctx.work_bits());
    auto pts = torsion_points(D, false);
    std::vector<Complex> terms(pts.size());
    parallel_for(pts.size(), [&](size_t i) { terms[i] = omega_t(z, pts[i], D, L, ctx); });
    return sum_ordered(terms);
}

Complex omega_D_closed(const Complex& z, long D, const Lattice& L, const PrecisionContext& ctx) {
    if (D < 2) throw DomainError("omega^D needs D >= 2");
    PrecisionGuard g(ctx.work_bits());
    Real d(D);
    return log_derivative_Z(z, L, ctx) * (d * d) - log_derivative_Z(z * d, L, ctx) * d;
}

KSDifferential KSDifferential::single(const TorsionPoint& t, long D, const Lattice& L) {
    require_torsion(t, D);
    if (t.is_zero()) throw DomainError("omega_t needs a nonzero torsion point");
    KSDifferential f;
    f.kind = Kind::single_t;
    f.t = t;
    f.D = D;
    f.L = L;
    return f;
}

KSDifferential KSDifferential::summed(long D, const Lattice& L) {
    if (D < 2) throw DomainError("omega^D needs D >= 2");
    KSDifferential f;
    f.kind = Kind::summed_D;
    f.D = D;
    f.L = L;
    return f;
}

Complex KSDifferential::operator()(const Complex& z, const PrecisionContext& ctx) const {
    return kind == Kind::single_t ? omega_t(z, t, D, L, ctx) : omega_D(z, D, L, ctx);
}

Complex KSDifferential::expected_residue(const TorsionPoint& p) const {
    require_torsion(p, D);
    if (kind == Kind::summed_D) return Complex(Real(p.is_zero() ? D * D - 1 : -1));
    // residue <t, D p>, with D p the lattice point (m, n)
    long f = D / p.order();
    return conj(pairing_lattice(p.a() * f, p.b() * f, t, L));
}

Complex contour_residue(const std::function<Complex(const Complex&)>& f, const Complex& center,
                        const Real& radius, const PrecisionContext& ctx, double rate,
                        int max_nodes) {
    PrecisionGuard g(ctx.work_bits());
    if (radius.sign() <= 0) throw ContourTooLarge("contour radius must be positive");
    auto level = [&](int M) {
        std::vector<Complex> terms(M);
        Real step = const_pi() * 2L / static_cast<long>(M);
        parallel_for(static_cast<size_t>(M), [&](size_t j) {
            Complex dz = expi(step * static_cast<long>(j)) * radius;
            terms[j] = f(center + dz) * dz;
        });
        return sum_ordered(terms) / Real(static_cast<long>(M));
    };
    const Real tol(ctx.tol());
    int M = 16;
    Complex prev = level(M);
    for (;;) {
        if (2 * M > max_nodes)
            throw PrecisionBudget("contour residue did not settle within " +
                                  std::to_string(max_nodes) + " nodes");
        Complex cur = level(2 * M);
        Real d = abs(cur - prev) * pow(Real(rate), static_cast<long>(M));
        if (d <= tol * max(abs(cur), Real(1))) return cur;
        prev = cur;
        M *= 2;
    }
}

Real residue_radius(long D, const Lattice& L) {
    if (D < 1) throw DomainError("isogeny degree must be positive");
    Real half = L.shortest_vector() / Real(2 * D);
    return min(Real(0.1), half);
}

std::vector<ResidueEntry> residue_table(const KSDifferential& form, const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    Real radius = residue_radius(form.D, form.L);
    std::vector<ResidueEntry> out;
    for (const auto& p : torsion_points(form.D, true)) {
        ResidueEntry e;
        e.point = p;
        e.residue = contour_residue([&](const Complex& z) { return form(z, ctx); },
                                    p.embed(form.L), radius, ctx);
        e.expected = form.expected_residue(p);
        out.push_back(e);
    }
    return out;
}

Real trace_check(long D, long N, const Complex& z, const Lattice& L,
                 const PrecisionContext& ctx) {
    if (N < 1) throw DomainError("trace degree must be positive");
    if (std::gcd(N, D) != 1) throw DomainError("trace needs gcd(N, D) = 1");
    PrecisionGuard g(ctx.work_bits());
    Complex fz = omega_D(z, D, L, ctx);
    std::vector<Complex> terms(static_cast<size_t>(N * N));
    parallel_for(terms.size(), [&](size_t i) {
        long m = static_cast<long>(i) / N, n = static_cast<long>(i) % N;
        terms[i] = omega_D((z + L.point(m, n)) / Real(N), D, L, ctx);
    });
    Complex avg = sum_ordered(terms) / Real(N);
    return rel_defect(avg, fz);
}

Real DistributionReport::max_defect() const {
    Real m(0);
    for (const auto& it : items)
        if (it.applicable && it.max_defect > m) m = it.max_defect;
    return m;
}

DistributionReport distribution_suite(long D, long Dp, long N, const TorsionPoint& s,
                                      const TorsionPoint& t, const Lattice& L,
                                      const PrecisionContext& ctx,
                                      const DistributionOptions& opt) {
    if (D < 1 || Dp < 1 || N < 1 || opt.psi_degree < 1)
        throw DomainError("distribution suite: degrees must be positive");
    if (opt.samples < 1) throw DomainError("distribution suite: need at least one sample");
    require_torsion(s, N);
    require_torsion(t, D);
    PrecisionGuard g(ctx.work_bits());
    Guard guard(L);
    DistributionReport rep;

    {
        IdentityDefect item;
        item.name = "trace_lemma";
        item.formula = "sum_{s in E[D']} omega^{[D'D]}_{t+s} = D'^2 omega^{[D]}_{D't}";
        long PQ = Dp * D;
        TorsionPoint image = t.times(Dp);
        if (image.is_zero()) {
            item.applicable = false;
            item.reason = "D' t is the identity";
            rep.items.push_back(item);
        } else {
            auto shifts = torsion_points(Dp, true);
            rep.items.push_back(run_identity(
                item,
                [&](const Complex& z, const Complex&) {
                    guard.check(z * Real(PQ));
                    std::vector<Complex> terms(shifts.size());
                    parallel_for(shifts.size(), [&](size_t i) {
                        terms[i] = omega_t(z, t + shifts[i], PQ, L, ctx);
                    });
                    Complex rhs = omega_t(z, image, D, L, ctx) * Real(Dp * Dp);
                    return Sides{sum_ordered(terms), rhs};
                },
                L, opt, 1));
        }
    }

    {
        IdentityDefect item;
        item.name = "degree_relation";
        item.formula =
            "D' sum_{b != 0} Theta_{0,b}(D'z, w) = D'^2 Theta(z, D'w) - D' Theta(D'z, w)";
        if (Dp < 2) {
            item.applicable = false;
            item.reason = "D' < 2";
            rep.items.push_back(item);
        } else {
            auto pts = torsion_points(Dp, false);
            Real d(Dp);
            Complex zero;
            rep.items.push_back(run_identity(
                item,
                [&](const Complex& z, const Complex& w) {
                    guard.check(z);
                    guard.check(w);
                    std::vector<Complex> terms(pts.size());
                    parallel_for(pts.size(), [&](size_t i) {
                        terms[i] = translate(guard, zero, pts[i].embed(L), z * d, w, L, ctx);
                    });
                    Complex lhs = sum_ordered(terms) * d;
                    Complex rhs = kronecker_theta(z, w * d, L, ctx) * (d * d) -
                                  kronecker_theta(z * d, w, L, ctx) * d;
                    return Sides{lhs, rhs};
                },
                L, opt, 2));
        }
    }

    {
        IdentityDefect item;
        item.name = "distribution_relation";
        item.formula =
            "sum_{a in E[M], b in E[D']} DD' Theta_{DD'(s+a), NM(t+b)}(DD'z, NMw) = "
            "D'^2 DM Theta_{DMs, ND't}(DMz, ND'w)";
        const long M = opt.psi_degree;
        if (std::gcd(Dp, N) != 1 || std::gcd(M, D) != 1 || std::gcd(M, Dp) != 1) {
            item.applicable = false;
            item.reason = "needs gcd(D', N) = gcd(M, D) = gcd(M, D') = 1";
            rep.items.push_back(item);
        } else {
            auto alphas = torsion_points(M, true);
            auto betas = torsion_points(Dp, true);
            Complex sv = s.embed(L), tv = t.embed(L);
            Real dd(D * Dp), nm(N * M), dm(D * M), nd(N * Dp);
            rep.items.push_back(run_identity(
                item,
                [&](const Complex& z, const Complex& w) {
                    size_t nb = betas.size();
                    std::vector<Complex> terms(alphas.size() * nb);
                    parallel_for(terms.size(), [&](size_t i) {
                        Complex z0 = (sv + alphas[i / nb].embed(L)) * dd;
                        Complex w0 = (tv + betas[i % nb].embed(L)) * nm;
                        terms[i] = translate(guard, z0, w0, z * dd, w * nm, L, ctx);
                    });
                    Complex lhs = sum_ordered(terms) * dd;
                    Complex rhs = translate(guard, sv * dm, tv * nd, z * dm, w * nd, L, ctx) *
                                  (Real(Dp * Dp) * dm);
                    return Sides{lhs, rhs};
                },
                L, opt, 3));
        }
    }
    return rep;
}

}  // namespace kron
