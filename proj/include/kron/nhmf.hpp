#pragma once
// Eisenstein-Kronecker classes in the Hodge basis [dz-bar]^i [dz]^{k+r+1-i},
// the D-variant summed over D-torsion, and the Katz comparison.

#include <vector>

#include "kron/ek.hpp"

namespace kron {

struct SymHodgeVector {
    int k = 0, r = 0;
    std::vector<Complex> coeffs;  // coeffs[i] for i = 0..min(k,r)

    int weight() const { return k + r + 1; }
    static SymHodgeVector zero(int k, int r);
    SymHodgeVector& operator+=(const SymHodgeVector& o);
};

Complex hodge_projection(const SymHodgeVector& v);

// c[i] = C(r,i) C(k,i) (-1)^i / A^i * e~_{k-i,r-i+1}(D s, N t)
// s nonzero N-torsion, t nonzero D-torsion, gcd(N, D) = 1.
SymHodgeVector algebraic_ek(int k, int r, const TorsionPoint& s, long N, const TorsionPoint& t,
                            long D, const Lattice& L, const PrecisionContext& ctx,
                            EKMethod method = EKMethod::automatic);
// Levels taken from the orders of s and t.
SymHodgeVector algebraic_ek(int k, int r, const TorsionPoint& s, const TorsionPoint& t,
                            const Lattice& L, const PrecisionContext& ctx,
                            EKMethod method = EKMethod::automatic);

// Sum of algebraic_ek(k, r, s, N, t, D) over the D^2 - 1 nonzero t in (1/D)Gamma/Gamma.
SymHodgeVector d_variant(int k, int r, const TorsionPoint& s, long N, long D, const Lattice& L,
                         const PrecisionContext& ctx, EKMethod method = EKMethod::automatic);

struct KatzComparison {
    Complex lhs;  // Hodge projection of the D-variant
    Complex rhs;  // N^{-k} [D^{k-r+1} Phi(s) - Phi(D s)] through K*_{k+r+1}(0, x, k+1)
    Real defect;  // |lhs - rhs| / |rhs|
};

// s = (a w1 + b w2)/N.
KatzComparison katz_comparison_check(int k, int r, long a, long b, long N, long D,
                                     const Lattice& L, const PrecisionContext& ctx);

}  // namespace kron
