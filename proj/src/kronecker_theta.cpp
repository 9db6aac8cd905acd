#include "kron/kronecker_theta.hpp"

#include "kron/errors.hpp"
#include "kron/parallel.hpp"

namespace kron {

namespace {

using Grid = std::vector<std::vector<Complex>>;

void pole_guard(const Complex& z, const Lattice& L, const PrecisionContext& ctx, const char* what) {
    if (L.distance_to_lattice(z) < ldexp(Real(1), -ctx.prec_bits / 2))
        throw PoleError(std::string("Kronecker theta pole: ") + what + " is a lattice point");
}

std::vector<Complex> unit_roots(int M) {
    std::vector<Complex> r(M);
    Real step = const_pi() * 2L / static_cast<long>(M);
    for (int j = 0; j < M; ++j) r[j] = expi(step * static_cast<long>(j));
    return r;
}

struct Extracted {
    std::vector<std::vector<Complex>> c;
    Real max_abs_f;
};

Extracted extract(const Grid& F, int M, const Real& rho_z, const Real& rho_w, int max_a,
                  int max_b) {
    // c[a][b] = M^{-2} sum_{j,l} F[j][l] e^{-2 pi i (j b + l a)/M} rho_z^{-b} rho_w^{-a}
    auto root = unit_roots(M);
    Extracted out;
    out.max_abs_f = Real(0);
    std::vector<std::vector<Complex>> G(M, std::vector<Complex>(max_a + 1));
    for (int j = 0; j < M; ++j) {
        for (int l = 0; l < M; ++l) {
            Real af = abs(F[j][l]);
            if (af > out.max_abs_f) out.max_abs_f = af;
        }
        for (int a = 0; a <= max_a; ++a) {
            Complex s;
            for (int l = 0; l < M; ++l) s += F[j][l] * conj(root[(static_cast<long>(l) * a) % M]);
            G[j][a] = s;
        }
    }
    out.c.assign(max_a + 1, std::vector<Complex>(max_b + 1));
    Real mm = Real(static_cast<long>(M)) * Real(static_cast<long>(M));
    for (int a = 0; a <= max_a; ++a) {
        Real ra = pow(rho_w, static_cast<long>(a));
        for (int b = 0; b <= max_b; ++b) {
            Complex s;
            for (int j = 0; j < M; ++j) s += G[j][a] * conj(root[(static_cast<long>(j) * b) % M]);
            out.c[a][b] = s / (mm * ra * pow(rho_z, static_cast<long>(b)));
        }
    }
    return out;
}

// `rate` bounds rho / (distance to the nearest singularity) in both variables;
// the level-2M error is then about |c_2M - c_M| * rate^M. rate = 1 means unknown.
template <class NodeEval>
TaylorGrid escalate(NodeEval&& eval, const Real& rho_z, const Real& rho_w, int max_a, int max_b,
                    double rate, const PrecisionContext& ctx, const TaylorOptions& opt) {
    if (max_a < 0 || max_b < 0) throw DomainError("negative Taylor order");
    int M = opt.min_nodes;
    while (M <= 2 * std::max(max_a, max_b) + 2) M *= 2;
    Extracted prev = extract(eval(M), M, rho_z, rho_w, max_a, max_b);
    const Real tol(ctx.tol());
    const Real floor_unit = ldexp(Real(1), -(ctx.prec_bits - 8));
    for (;;) {
        int M2 = 2 * M;
        if (M2 > opt.max_nodes)
            throw PrecisionBudget("Cauchy extraction did not settle within " +
                                  std::to_string(opt.max_nodes) + " nodes");
        Extracted cur = extract(eval(M2), M2, rho_z, rho_w, max_a, max_b);
        const Real damp = pow(Real(rate), static_cast<long>(M));
        bool ok = true;
        Real worst(0);
        for (int a = 0; a <= max_a; ++a)
            for (int b = 0; b <= max_b; ++b) {
                Real d = abs(cur.c[a][b] - prev.c[a][b]) * damp;
                Real floor_ab = floor_unit * cur.max_abs_f /
                                (pow(rho_w, static_cast<long>(a)) * pow(rho_z, static_cast<long>(b)));
                Real scale = max(abs(cur.c[a][b]), floor_ab);
                Real r = d / scale;
                if (r > worst) worst = r;
                if (d > tol * abs(cur.c[a][b]) && d > floor_ab) ok = false;
            }
        if (ok) {
            TaylorGrid g;
            g.c = std::move(cur.c);
            g.rho_z = rho_z;
            g.rho_w = rho_w;
            g.nodes = M2;
            g.est_error = worst;
            return g;
        }
        prev = std::move(cur);
        M = M2;
    }
}

}  // namespace

ThetaTranslate ThetaTranslate::from_torsion(const TorsionPoint& s, const TorsionPoint& t,
                                            const Lattice& L) {
    PrecisionGuard g(L.prec_bits());
    return {s.embed(L), t.embed(L), L};
}

Complex kronecker_theta(const Complex& z, const Complex& w, const Lattice& L,
                        const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    pole_guard(z, L, ctx, "z");
    pole_guard(w, L, ctx, "w");
    return theta(z + w, L, ctx) / (theta(z, L, ctx) * theta(w, L, ctx));
}

Complex translated_theta(const ThetaTranslate& tr, const Complex& z, const Complex& w,
                         const PrecisionContext& ctx) {
    PrecisionGuard g(ctx.work_bits());
    const Real& A = tr.L.area_A();
    Complex ex = z * conj(tr.w0) + w * conj(tr.z0) + tr.z0 * conj(tr.w0);
    return exp(-ex / A) * kronecker_theta(z + tr.z0, w + tr.w0, tr.L, ctx);
}

TaylorGrid taylor_coeffs(const ThetaTranslate& tr, int max_a, int max_b,
                         const PrecisionContext& ctx, const TaylorOptions& opt) {
    PrecisionGuard g(ctx.work_bits());
    const Lattice& L = tr.L;
    Real tiny = ldexp(Real(1), -ctx.prec_bits / 2);
    Real dz = L.distance_to_lattice(tr.z0), dw = L.distance_to_lattice(tr.w0);
    if (dz < tiny || dw < tiny)
        throw ContourTooLarge("translate has a pole at the expansion point");
    if (!(opt.rho_fraction > 0.0 && opt.rho_fraction < 1.0))
        throw ContourTooLarge("contour radius must stay below the pole distance");
    Real rho_z = dz * Real(opt.rho_fraction), rho_w = dw * Real(opt.rho_fraction);
    const Real& A = L.area_A();
    Complex K = exp(-(tr.z0 * conj(tr.w0)) / A);
    Complex s0 = tr.z0 + tr.w0;

    auto eval = [&](int M) {
        auto root = unit_roots(M);
        std::vector<Complex> zj(M), wl(M), Aj(M), Bl(M), Ej(M), Gl(M);
        parallel_for(static_cast<size_t>(M), [&](size_t j) {
            zj[j] = root[j] * rho_z;
            wl[j] = root[j] * rho_w;
            Aj[j] = theta(zj[j] + tr.z0, L, ctx);
            Bl[j] = theta(wl[j] + tr.w0, L, ctx);
            Ej[j] = exp(-(zj[j] * conj(tr.w0)) / A);
            Gl[j] = exp(-(wl[j] * conj(tr.z0)) / A);
        });
        Grid F(M, std::vector<Complex>(M));
        parallel_for(static_cast<size_t>(M), [&](size_t j) {
            Complex rowf = K * Ej[j] / Aj[j];
            for (int l = 0; l < M; ++l)
                F[j][l] = rowf * Gl[l] * theta(zj[j] + wl[l] + s0, L, ctx) / Bl[l];
        });
        return F;
    };
    return escalate(eval, rho_z, rho_w, max_a, max_b, opt.rho_fraction, ctx, opt);
}

TaylorGrid cauchy_coeffs2(const Function2& f, const Real& rho_z, const Real& rho_w, int max_a,
                          int max_b, const PrecisionContext& ctx, const TaylorOptions& opt) {
    PrecisionGuard g(ctx.work_bits());
    if (rho_z.sign() <= 0 || rho_w.sign() <= 0) throw ContourTooLarge("radii must be positive");
    auto eval = [&](int M) {
        auto root = unit_roots(M);
        Grid F(M, std::vector<Complex>(M));
        parallel_for(static_cast<size_t>(M), [&](size_t j) {
            Complex z = root[j] * rho_z;
            for (int l = 0; l < M; ++l) F[j][l] = f(z, root[l] * rho_w);
        });
        return F;
    };
    return escalate(eval, rho_z, rho_w, max_a, max_b, 1.0, ctx, opt);
}

}  // namespace kron
