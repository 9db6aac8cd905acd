#pragma once
// Two-variable measures on Z_p^2 through their Amice transforms.
//
// A TruncatedSeries2 is a polynomial f(S,T) over Z/p^M, i.e. a finite
// combination of Dirac masses (1+S)^x (1+T)^y. All operations below are
// exact on such polynomials and keep the precision M.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kron {

using Residue = std::int64_t;

// Z/p^M
struct PadicRing {
    int p = 5;
    int M = 6;
    Residue modulus = 15625;

    PadicRing() = default;
    PadicRing(int p, int M);

    Residue reduce(__int128 x) const;
    Residue add(Residue a, Residue b) const { return reduce(static_cast<__int128>(a) + b); }
    Residue sub(Residue a, Residue b) const { return reduce(static_cast<__int128>(a) - b); }
    Residue mul(Residue a, Residue b) const { return reduce(static_cast<__int128>(a) * b); }
    int valuation(Residue a) const;  // M for zero
    bool operator==(const PadicRing& o) const { return p == o.p && M == o.M; }
};

enum class Var { S, T };

class TruncatedSeries2 {
public:
    TruncatedSeries2() = default;
    TruncatedSeries2(PadicRing ring, int degS, int degT);

    static TruncatedSeries2 constant(PadicRing ring, Residue c);
    // (1+S)^a (1+T)^b, a, b >= 0
    static TruncatedSeries2 dirac(PadicRing ring, long a, long b);

    const PadicRing& ring() const { return ring_; }
    int p() const { return ring_.p; }
    int prec() const { return ring_.M; }
    int degS() const { return degS_; }
    int degT() const { return degT_; }
    Residue coeff(int i, int j) const;  // coefficient of S^i T^j; 0 outside the box
    void set(int i, int j, Residue v);

    TruncatedSeries2 operator+(const TruncatedSeries2& o) const;
    TruncatedSeries2 operator-(const TruncatedSeries2& o) const;
    TruncatedSeries2 operator*(const TruncatedSeries2& o) const;
    TruncatedSeries2 scaled(Residue c) const;
    // Same coefficients read modulo p^M2, M2 <= M.
    TruncatedSeries2 reduced_to(int M2) const;
    // Equality modulo p^min(M, o.M), degrees padded with zeros.
    bool congruent(const TruncatedSeries2& o, int M2 = -1) const;

private:
    PadicRing ring_;
    int degS_ = 0, degT_ = 0;
    std::vector<Residue> c_;  // row-major, (degS+1) x (degT+1)
};

// Polynomial in X over Z/p^M modulo Phi_{p^n}(X); X is a primitive p^n-th root of unity.
class CyclotomicElt {
public:
    CyclotomicElt() = default;
    CyclotomicElt(PadicRing ring, int level);

    static CyclotomicElt from_int(PadicRing ring, int level, Residue c);
    static CyclotomicElt x_power(PadicRing ring, int level, long e);  // X^e, any integer e

    int level() const { return level_; }
    int dimension() const { return static_cast<int>(c_.size()); }  // (p-1) p^{n-1}
    const PadicRing& ring() const { return ring_; }
    Residue coeff(int i) const { return c_[i]; }

    CyclotomicElt operator+(const CyclotomicElt& o) const;
    CyclotomicElt operator-(const CyclotomicElt& o) const;
    CyclotomicElt operator*(const CyclotomicElt& o) const;
    CyclotomicElt scaled(Residue c) const;
    bool operator==(const CyclotomicElt& o) const;

    // X -> X^k, gcd(k, p) = 1
    CyclotomicElt galois(long k) const;
    // sum of all Galois conjugates; always rational
    Residue trace() const;
    bool is_rational() const;
    Residue rational_value() const;  // NotRational unless is_rational()

private:
    PadicRing ring_;
    int level_ = 1;
    long order_ = 5;  // p^n
    std::vector<Residue> c_;
    void reduce_from(std::vector<Residue> wide);
};

TruncatedSeries2 invariant_derive(const TruncatedSeries2& f, Var var);

struct MeasureMoments {
    int p = 5;
    int prec = 6;
    std::vector<std::vector<Residue>> m;  // m[k][l]
};
// d_S^k d_T^l f at S = T = 0
Residue moment(const TruncatedSeries2& f, int k, int l);
MeasureMoments moments(const TruncatedSeries2& f, int K, int L);

// f(S,T) - (1/p) sum_{zeta^p = 1} f((1+S)zeta - 1, T)
TruncatedSeries2 restrict_unit_S(const TruncatedSeries2& f);
// (1/p) sum_{zeta^p = 1} f((1+S)zeta - 1, T): the part supported on pZ_p x Z_p.
TruncatedSeries2 p_part_S(const TruncatedSeries2& f);
// f((1+S)^p - 1, T)
TruncatedSeries2 pushforward_p(const TruncatedSeries2& f, int max_degree = 4096);

// Measure of (a + p^n Z_p) in `var`, as a series in the other variable
// (a one-row/one-column TruncatedSeries2).
TruncatedSeries2 measure_eval(const TruncatedSeries2& f, int level_n, long a, Var var);

struct KummerViolation {
    std::string kind;  // "kummer" or "mahler"
    int l = 0;
    int k = 0, k2 = 0;  // for mahler: k = n
    int v = 0;          // required valuation
};

struct KummerReport {
    bool ok = true;
    int checked = 0;
    std::vector<KummerViolation> violations;
};

// Mahler integrality sum_k s(n,k) m[k][l] = 0 mod p^{v_p(n!)} and the Kummer
// congruences m[k][l] = m[k'][l] mod p^{v+1} for k = k' mod (p-1)p^v.
// The Kummer part presumes a measure supported on Z_p^x in the first variable.
KummerReport kummer_check(const MeasureMoments& m);

// Checks p Frob(theta([p](S), T)) = sum_{zeta^p = 1} theta((1+S)zeta - 1, T) for a
// user-supplied coefficient endomorphism `frob`.
using CoefficientMap = std::function<TruncatedSeries2(const TruncatedSeries2&)>;
bool frobenius_relation_holds(const TruncatedSeries2& theta, const CoefficientMap& frob);

// Text format: a header line "p M degS degT", then degS+1 lines of degT+1
// base-10 residues (row i holds the coefficients of S^i T^0 ... S^i T^degT).
void write_series(std::ostream& os, const TruncatedSeries2& f);
TruncatedSeries2 read_series(std::istream& is);

}  // namespace kron
