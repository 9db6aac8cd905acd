#pragma once
// Complex lattices, the pairing <z,w>, and the theta kernel
// (sigma, zeta, quasi-periods, e2*, theta, Z = theta'/theta).

#include <optional>
#include <vector>
#include <string>

#include "kron/mp.hpp"
#include "kron/precision.hpp"

namespace kron {

// Calibration data that depends only on (tau, precision); cacheable.
struct LatticeInvariants {
    int prec_bits = 0;
    Complex theta1p0;   // theta_1'(0) without the q^{1/4} factor
    Complex eta_n1;     // quasi-period of zeta at 1 on Z + tau Z
    Complex eta_ntau;   // quasi-period of zeta at tau on Z + tau Z

    std::string serialize() const;
    static LatticeInvariants parse(const std::string& text);
};

class Lattice {
public:
    static Lattice from_tau(const Complex& tau, const PrecisionContext& ctx);
    // Either orientation is accepted; A is |Im(w1 conj w2)|/pi.
    static Lattice from_periods(const Complex& omega1, const Complex& omega2,
                                const PrecisionContext& ctx,
                                const LatticeInvariants* cached = nullptr);

    const Complex& omega1() const { return omega1_; }
    const Complex& omega2() const { return omega2_; }
    const Complex& tau() const { return tau_; }
    const Real& area_A() const { return A_; }
    const Complex& eta1() const { return eta1_; }
    const Complex& eta2() const { return eta2_; }
    const Complex& e2star() const { return e2star_; }
    int orientation() const { return orient_; }  // sign of Im(w1 conj w2)
    int prec_bits() const { return inv_.prec_bits; }
    const LatticeInvariants& invariants() const { return inv_; }

    Complex point(long m, long n) const;            // m*w1 + n*w2
    Complex quasi_period(long m, long n) const;     // eta(m*w1 + n*w2)
    void coordinates(const Complex& z, Real& x, Real& y) const;  // z = x w1 + y w2
    Real distance_to_lattice(const Complex& z) const;
    bool contains(const Complex& z, const Real& tol) const;
    Real shortest_vector() const;

    // Normalized-lattice data: Gamma = scale * (Z + tau Z).
    const Complex& scale() const { return scale_; }
    const Complex& q() const { return q_; }
    const Complex& q_quarter() const { return q4_; }
    const Real& area_normalized() const { return An_; }
    const Complex& e2star_normalized() const { return e2n_; }

private:
    Complex omega1_, omega2_, tau_, eta1_, eta2_, e2star_;
    Real A_;
    int orient_ = 1;
    Complex scale_, q_, q4_, e2n_;
    Real An_;
    LatticeInvariants inv_;
};

// Exact rational point (a*w1 + b*w2)/N, stored reduced.
class TorsionPoint {
public:
    TorsionPoint() = default;
    TorsionPoint(long a, long b, long n);

    long a() const { return a_; }
    long b() const { return b_; }
    long denominator() const { return n_; }
    long order() const { return n_; }  // reduced, so the denominator is the order
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    Complex embed(const Lattice& L) const;
    TorsionPoint operator+(const TorsionPoint& o) const;
    TorsionPoint operator-() const;
    TorsionPoint times(long m) const;
    bool operator==(const TorsionPoint& o) const { return a_ == o.a_ && b_ == o.b_ && n_ == o.n_; }
    bool operator!=(const TorsionPoint& o) const { return !(*this == o); }
    std::string to_string() const;

private:
    long a_ = 0, b_ = 0, n_ = 1;
};

struct LatticePoint {
    long m = 0, n = 0;  // gamma = m w1 + n w2
    Complex x;          // shift + gamma
    Real norm2;         // |x|^2
};

// All gamma with |shift + gamma| <= radius, ordered by (|x|, m, n).
std::vector<LatticePoint> lattice_points_in_disk(const Lattice& L, const Complex& shift,
                                                 const Real& radius);

// All points of (1/N)Gamma/Gamma, in a fixed order (a major, b minor).
std::vector<TorsionPoint> torsion_points(long N, bool include_zero);

// <z,w> = exp((z conj w - w conj z)/A)
Complex pairing(const Complex& z, const Complex& w, const Lattice& L);
// Exact root of unity <x,y> for x=(a1 w1 + b1 w2)/N1, y=(a2 w1 + b2 w2)/N2.
Complex pairing(const TorsionPoint& x, const TorsionPoint& y, const Lattice& L);
// <m w1 + n w2, t>
Complex pairing_lattice(long m, long n, const TorsionPoint& t, const Lattice& L);

Complex sigma(const Complex& z, const Lattice& L, const PrecisionContext& ctx);
Complex weierstrass_zeta(const Complex& z, const Lattice& L, const PrecisionContext& ctx);
Complex theta(const Complex& z, const Lattice& L, const PrecisionContext& ctx);
Complex log_derivative_Z(const Complex& z, const Lattice& L, const PrecisionContext& ctx);

struct ThetaLawCheck {
    int alpha = 1;
    Real defect;
};
// theta(z+g) = alpha(g) exp(z conj(g)/A + g conj(g)/(2A)) theta(z), g = m w1 + n w2.
ThetaLawCheck theta_transform_check(long m, long n, const Complex& z, const Lattice& L,
                                    const PrecisionContext& ctx);

// Residual |eta1 w2 - eta2 w1 - sign*2 pi i|.
Real legendre_residual(const Lattice& L);

// Jacobi theta_1 and its derivative on Z + tau Z (q = e^{i pi tau}), both
// without the common factor 2 q^{1/4}. Exposed for tests.
void jacobi_theta1_core(const Complex& x, const Lattice& L, const PrecisionContext& ctx,
                        Complex& th, Complex& thp);

}  // namespace kron
