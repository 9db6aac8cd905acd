#pragma once
// Eisenstein-Kronecker numbers
//   e*_{k,r}(s,t) = sum_{g != -s} conj(s+g)^k / (s+g)^r <g,t>
// by direct summation, by the incomplete-gamma continuation of
//   K*_a(z,w,s) = sum_{g != -z} conj(z+g)^a / |z+g|^{2s} <g,w>,
// and the normalization e~_{k,r+1} = (-1)^{k+r} r!/A^k e*_{k,r+1}.

#include <string>

#include "kron/kronecker_theta.hpp"
#include "kron/lattice.hpp"

namespace kron {

enum class EKMethod { automatic, direct, lerch, theta_taylor };
enum class DirectScheme { rows, shells };

std::string to_string(EKMethod m);
EKMethod parse_method(const std::string& name);

struct EKValue {
    Complex value;
    EKMethod method = EKMethod::automatic;
    Real est_error;  // absolute
};

// e*_{k,r}(s,t), r > k+2.
// rows: exact inner sums along Z through cotangent derivatives, outer sum
//       over rows of Z + tau Z until the Lipschitz tail bound is below 2^-prec.
// shells: plain partial sum over |s+g| <= sum_radius with the integral tail bound.
EKValue ek_direct(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                  const PrecisionContext& ctx, DirectScheme scheme = DirectScheme::rows);

// K*_a(z,w,s) continued to all s; PoleError at s = 1 when a = 0 and w is in the lattice.
Complex lerch_Kstar(int a, const Complex& z, const Complex& w, const Complex& s, const Lattice& L,
                    const PrecisionContext& ctx);
// Same with exact torsion characters.
Complex lerch_Kstar(int a, const TorsionPoint& z, const TorsionPoint& w, const Complex& s,
                    const Lattice& L, const PrecisionContext& ctx);

// e*_{k,r}(s,t) = K*_{k+r}(s,t,r) for any k >= 0, r >= 1.
EKValue ek_star(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                const PrecisionContext& ctx, EKMethod method = EKMethod::automatic);

// e~_{k,r+1}(s,t). automatic: direct when r+1 > k+2, lerch otherwise.
// theta_taylor returns k! r! [z^r w^k] Theta_{s,t}(z,w) and needs s, t nonzero.
EKValue ek_normalized(int k, int r, const TorsionPoint& s, const TorsionPoint& t, const Lattice& L,
                      const PrecisionContext& ctx, EKMethod method = EKMethod::automatic);

}  // namespace kron
