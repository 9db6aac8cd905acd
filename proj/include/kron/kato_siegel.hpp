#pragma once
// Logarithmic derivatives of Kato-Siegel functions built from the Kronecker
// theta function, and the distribution relations of its translates.
//
//   omega_t(z)  = D exp(-D z conj(t)/A) Theta(Dz, t),   t in (1/D)Gamma, t != 0
//   omega^D(z)  = sum_{t != 0} omega_t(z) = D^2 Z(z) - D Z(Dz)
//
// All values are coefficients of dz.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kron/kronecker_theta.hpp"
#include "kron/lattice.hpp"

namespace kron {

// omega_t for the isogeny [D]; needs D t = 0 and t != 0.
Complex omega_t(const Complex& z, const TorsionPoint& t, long D, const Lattice& L,
                const PrecisionContext& ctx);
// Sum of omega_t over the D^2 - 1 nonzero D-torsion points.
Complex omega_D(const Complex& z, long D, const Lattice& L, const PrecisionContext& ctx);
// D^2 Z(z) - D Z(Dz)
Complex omega_D_closed(const Complex& z, long D, const Lattice& L, const PrecisionContext& ctx);

struct KSDifferential {
    enum class Kind { single_t, summed_D };
    Kind kind = Kind::summed_D;
    TorsionPoint t;
    long D = 2;
    Lattice L;

    static KSDifferential single(const TorsionPoint& t, long D, const Lattice& L);
    static KSDifferential summed(long D, const Lattice& L);

    Complex operator()(const Complex& z, const PrecisionContext& ctx) const;
    // Residue predicted at the point p of (1/D)Gamma (exact root of unity or integer).
    Complex expected_residue(const TorsionPoint& p) const;
};

// (1/2 pi i) times the integral of f over the circle |z - center| = radius.
// Trapezoid rule with doubling; `rate` bounds radius / (distance to the
// nearest other singularity).
Complex contour_residue(const std::function<Complex(const Complex&)>& f, const Complex& center,
                        const Real& radius, const PrecisionContext& ctx, double rate = 0.5,
                        int max_nodes = 4096);

// min(0.1, half the distance between neighbouring points of (1/D)Gamma)
Real residue_radius(long D, const Lattice& L);

struct ResidueEntry {
    TorsionPoint point;
    Complex residue;
    Complex expected;
};
// Numerical residues of `form` at every point of (1/D)Gamma/Gamma.
std::vector<ResidueEntry> residue_table(const KSDifferential& form, const PrecisionContext& ctx);

// Relative defect of (1/N) sum_{Nw = z} omega^D(w) against omega^D(z); gcd(N, D) = 1.
Real trace_check(long D, long N, const Complex& z, const Lattice& L, const PrecisionContext& ctx);

struct IdentityDefect {
    std::string name;
    std::string formula;
    bool applicable = true;
    std::string reason;  // why the identity was skipped
    int samples = 0;
    Real max_defect;
};

struct DistributionReport {
    std::vector<IdentityDefect> items;
    Real max_defect() const;
};

struct DistributionOptions {
    long psi_degree = 1;  // psi = [M] in the general relation
    int samples = 5;
    std::uint64_t seed = 20240611;
};

// Three identities between finite sums of translated theta values:
//   trace lemma   sum_{s in E[D']} omega^{[D'D]}_{t+s} = D'^2 omega^{[D]}_{D't}
//   degree D'     D' sum_{b != 0} Theta_{0,b}(D'z, w) = D'^2 Theta(z, D'w) - D' Theta(D'z, w)
//   general       sum_{a in E[M], b in E[D']} DD' Theta_{DD'(s+a), NM(t+b)}(DD'z, NMw)
//                   = D'^2 DM Theta_{DMs, ND't}(DMz, ND'w)
// s has order dividing N, t order dividing D. Sampled points near poles are
// redrawn; identities whose hypotheses fail are reported as not applicable.
DistributionReport distribution_suite(long D, long Dp, long N, const TorsionPoint& s,
                                      const TorsionPoint& t, const Lattice& L,
                                      const PrecisionContext& ctx,
                                      const DistributionOptions& opt = {});

}  // namespace kron
