#pragma once
// Kronecker theta function Theta(z,w) = theta(z+w)/(theta(z) theta(w)), its
// translates, and two-variable Taylor coefficients by Cauchy integrals.

#include <functional>
#include <vector>

#include "kron/lattice.hpp"

namespace kron {

struct ThetaTranslate {
    Complex z0;
    Complex w0;
    Lattice L;

    static ThetaTranslate from_torsion(const TorsionPoint& s, const TorsionPoint& t,
                                       const Lattice& L);
};

Complex kronecker_theta(const Complex& z, const Complex& w, const Lattice& L,
                        const PrecisionContext& ctx);

// exp(-(z conj w0 + w conj z0 + z0 conj w0)/A) * Theta(z+z0, w+w0)
Complex translated_theta(const ThetaTranslate& tr, const Complex& z, const Complex& w,
                         const PrecisionContext& ctx);

struct TaylorGrid {
    std::vector<std::vector<Complex>> c;  // c[a][b]: coefficient of z^b w^a
    Real rho_z, rho_w;
    int nodes = 0;      // trapezoid nodes per circle at the accepted level
    Real est_error;     // predicted relative error of the returned level
};

struct TaylorOptions {
    double rho_fraction = 0.25;  // radius as a fraction of the distance to the nearest pole
    int min_nodes = 16;
    int max_nodes = 512;
};

// c[a][b] for a <= max_a, b <= max_b. Contract: a! b! c[a][b] = e~_{a,b+1}(z0, w0).
TaylorGrid taylor_coeffs(const ThetaTranslate& tr, int max_a, int max_b,
                         const PrecisionContext& ctx, const TaylorOptions& opt = {});

// Same extraction for an arbitrary function analytic on the closed bidisc.
using Function2 = std::function<Complex(const Complex& z, const Complex& w)>;
TaylorGrid cauchy_coeffs2(const Function2& f, const Real& rho_z, const Real& rho_w, int max_a,
                          int max_b, const PrecisionContext& ctx, const TaylorOptions& opt = {});

}  // namespace kron
