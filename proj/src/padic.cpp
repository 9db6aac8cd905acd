#include "kron/padic.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "kron/errors.hpp"

namespace kron {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void require_same(const PadicRing& a, const PadicRing& b) {
    if (!(a == b)) throw DomainError("series over different coefficient rings");
}

// polynomial in S with cyclotomic coefficients
using CycPoly = std::vector<CyclotomicElt>;

CycPoly cyc_mul(const CycPoly& a, const CycPoly& b, const PadicRing& R, int level) {
    CycPoly out(a.size() + b.size() - 1, CyclotomicElt(R, level));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

// sum_{zeta^p = 1} f((1+S) zeta - 1, T), exact over Z/p^M
TruncatedSeries2 sum_over_roots(const TruncatedSeries2& f) {
    const PadicRing& R = f.ring();
    const int p = R.p;
    const int dS = f.degS(), dT = f.degT();
    CyclotomicElt one = CyclotomicElt::from_int(R, 1, 1);
    CyclotomicElt X = CyclotomicElt::x_power(R, 1, 1);
    CycPoly u{X - one, X};  // (1+S)X - 1
    CycPoly power{one};
    std::vector<std::vector<CyclotomicElt>> g(dS + 1,
                                              std::vector<CyclotomicElt>(dT + 1, CyclotomicElt(R, 1)));
    for (int i = 0; i <= dS; ++i) {
        for (int m = 0; m <= i; ++m)
            for (int j = 0; j <= dT; ++j) {
                Residue c = f.coeff(i, j);
                if (c != 0) g[m][j] = g[m][j] + power[m].scaled(c);
            }
        if (i < dS) power = cyc_mul(power, u, R, 1);
    }
    TruncatedSeries2 out(R, dS, dT);
    for (int m = 0; m <= dS; ++m)
        for (int j = 0; j <= dT; ++j) {
            CyclotomicElt acc(R, 1);
            for (long k = 1; k < p; ++k) acc = acc + g[m][j].galois(k);
            if (!acc.is_rational()) throw NotRational("conjugate sum left the base ring");
            out.set(m, j, R.add(acc.rational_value(), f.coeff(m, j)));
        }
    return out;
}

TruncatedSeries2 divide_by_p_power(const TruncatedSeries2& f, int e) {
    const PadicRing& R = f.ring();
    if (R.M - e < 1) throw DomainError("not enough p-adic precision for this level");
    PadicRing R2(R.p, R.M - e);
    const long pe = ipow(R.p, e);
    TruncatedSeries2 out(R2, f.degS(), f.degT());
    for (int i = 0; i <= f.degS(); ++i)
        for (int j = 0; j <= f.degT(); ++j) {
            Residue c = f.coeff(i, j);
            if (c % pe != 0)
                throw NotDivisible("coefficient of S^" + std::to_string(i) + " T^" +
                                   std::to_string(j) + " is not divisible by p^" +
                                   std::to_string(e));
            out.set(i, j, R2.reduce(c / pe));
        }
    return out;
}

// Same residues read in Z/p^{M+e}. The root-of-unity sums below are divisible
// by p^e for every lift, and the quotient mod p^M does not depend on the lift.
TruncatedSeries2 lifted(const TruncatedSeries2& f, int e) {
    TruncatedSeries2 out(PadicRing(f.p(), f.prec() + e), f.degS(), f.degT());
    for (int i = 0; i <= f.degS(); ++i)
        for (int j = 0; j <= f.degT(); ++j) out.set(i, j, f.coeff(i, j));
    return out;
}

TruncatedSeries2 transpose(const TruncatedSeries2& f) {
    TruncatedSeries2 out(f.ring(), f.degT(), f.degS());
    for (int i = 0; i <= f.degS(); ++i)
        for (int j = 0; j <= f.degT(); ++j) out.set(j, i, f.coeff(i, j));
    return out;
}

std::vector<Residue> derive_poly(const std::vector<Residue>& c, const PadicRing& R) {
    std::vector<Residue> out(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        Residue v = R.mul(static_cast<Residue>(i), c[i]);
        if (i + 1 < c.size()) v = R.add(v, R.mul(static_cast<Residue>(i + 1), c[i + 1]));
        out[i] = v;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Z/p^M

PadicRing::PadicRing(int p_, int M_) : p(p_), M(M_) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    if (M < 1) throw DomainError("p-adic precision must be at least 1");
    __int128 m = 1;
    for (int i = 0; i < M; ++i) {
        m *= p;
        if (m > (static_cast<__int128>(1) << 62)) throw DomainError("p^M too large");
    }
    modulus = static_cast<Residue>(m);
}

Residue PadicRing::reduce(__int128 x) const {
    __int128 r = x % modulus;
    if (r < 0) r += modulus;
    return static_cast<Residue>(r);
}

int PadicRing::valuation(Residue a) const {
    a = reduce(a);
    if (a == 0) return M;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

// ---------------------------------------------------------------- series

TruncatedSeries2::TruncatedSeries2(PadicRing ring, int degS, int degT)
    : ring_(ring), degS_(degS), degT_(degT) {
    if (degS < 0 || degT < 0) throw DomainError("negative series degree");
    c_.assign(static_cast<size_t>(degS + 1) * (degT + 1), 0);
}

TruncatedSeries2 TruncatedSeries2::constant(PadicRing ring, Residue c) {
    TruncatedSeries2 f(ring, 0, 0);
    f.set(0, 0, c);
    return f;
}

TruncatedSeries2 TruncatedSeries2::dirac(PadicRing ring, long a, long b) {
    if (a < 0 || b < 0) throw DomainError("Dirac mass needs nonnegative exponents");
    auto binom_row = [&](long n) {
        std::vector<Residue> row{1};
        for (long i = 0; i < n; ++i) {
            row.push_back(0);
            for (size_t k = row.size() - 1; k > 0; --k) row[k] = ring.add(row[k], row[k - 1]);
        }
        return row;
    };
    auto ra = binom_row(a), rb = binom_row(b);
    TruncatedSeries2 f(ring, static_cast<int>(a), static_cast<int>(b));
    for (size_t i = 0; i < ra.size(); ++i)
        for (size_t j = 0; j < rb.size(); ++j)
            f.set(static_cast<int>(i), static_cast<int>(j), ring.mul(ra[i], rb[j]));
    return f;
}

Residue TruncatedSeries2::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i > degS_ || j > degT_) return 0;
    return c_[static_cast<size_t>(i) * (degT_ + 1) + j];
}

void TruncatedSeries2::set(int i, int j, Residue v) {
    if (i < 0 || j < 0 || i > degS_ || j > degT_) throw DomainError("coefficient index outside the series");
    c_[static_cast<size_t>(i) * (degT_ + 1) + j] = ring_.reduce(v);
}

TruncatedSeries2 TruncatedSeries2::operator+(const TruncatedSeries2& o) const {
    require_same(ring_, o.ring_);
    TruncatedSeries2 out(ring_, std::max(degS_, o.degS_), std::max(degT_, o.degT_));
    for (int i = 0; i <= out.degS_; ++i)
        for (int j = 0; j <= out.degT_; ++j) out.set(i, j, ring_.add(coeff(i, j), o.coeff(i, j)));
    return out;
}

TruncatedSeries2 TruncatedSeries2::operator-(const TruncatedSeries2& o) const {
    require_same(ring_, o.ring_);
    TruncatedSeries2 out(ring_, std::max(degS_, o.degS_), std::max(degT_, o.degT_));
    for (int i = 0; i <= out.degS_; ++i)
        for (int j = 0; j <= out.degT_; ++j) out.set(i, j, ring_.sub(coeff(i, j), o.coeff(i, j)));
    return out;
}

TruncatedSeries2 TruncatedSeries2::operator*(const TruncatedSeries2& o) const {
    require_same(ring_, o.ring_);
    TruncatedSeries2 out(ring_, degS_ + o.degS_, degT_ + o.degT_);
    for (int i = 0; i <= degS_; ++i)
        for (int j = 0; j <= degT_; ++j) {
            Residue a = coeff(i, j);
            if (a == 0) continue;
            for (int k = 0; k <= o.degS_; ++k)
                for (int l = 0; l <= o.degT_; ++l)
                    out.set(i + k, j + l, ring_.add(out.coeff(i + k, j + l), ring_.mul(a, o.coeff(k, l))));
        }
    return out;
}

TruncatedSeries2 TruncatedSeries2::scaled(Residue c) const {
    TruncatedSeries2 out = *this;
    for (auto& v : out.c_) v = ring_.mul(v, ring_.reduce(c));
    return out;
}

TruncatedSeries2 TruncatedSeries2::reduced_to(int M2) const {
    if (M2 > ring_.M) throw DomainError("cannot raise p-adic precision");
    TruncatedSeries2 out(PadicRing(ring_.p, M2), degS_, degT_);
    for (int i = 0; i <= degS_; ++i)
        for (int j = 0; j <= degT_; ++j) out.set(i, j, coeff(i, j));
    return out;
}

bool TruncatedSeries2::congruent(const TruncatedSeries2& o, int M2) const {
    if (ring_.p != o.ring_.p) return false;
    if (M2 < 0) M2 = std::min(ring_.M, o.ring_.M);
    if (M2 > std::min(ring_.M, o.ring_.M)) throw DomainError("congruence beyond known precision");
    PadicRing R(ring_.p, M2);
    int dS = std::max(degS_, o.degS_), dT = std::max(degT_, o.degT_);
    for (int i = 0; i <= dS; ++i)
        for (int j = 0; j <= dT; ++j)
            if (R.reduce(coeff(i, j)) != R.reduce(o.coeff(i, j))) return false;
    return true;
}

// ---------------------------------------------------------------- cyclotomic

CyclotomicElt::CyclotomicElt(PadicRing ring, int level) : ring_(ring), level_(level) {
    if (level < 1) throw DomainError("cyclotomic level must be at least 1");
    order_ = ipow(ring.p, level);
    c_.assign(static_cast<size_t>((ring.p - 1) * ipow(ring.p, level - 1)), 0);
}

void CyclotomicElt::reduce_from(std::vector<Residue> wide) {
    // X^d = -sum_{j < p-1} X^{j p^{n-1}}, d = (p-1) p^{n-1}
    const long d = static_cast<long>(c_.size());
    const long step = order_ / ring_.p;
    for (long i = static_cast<long>(wide.size()) - 1; i >= d; --i) {
        Residue c = wide[i];
        if (c == 0) continue;
        wide[i] = 0;
        for (long j = 0; j < ring_.p - 1; ++j) {
            long idx = i - d + j * step;
            wide[idx] = ring_.sub(wide[idx], c);
        }
    }
    for (long i = 0; i < d; ++i) c_[i] = i < static_cast<long>(wide.size()) ? ring_.reduce(wide[i]) : 0;
}

CyclotomicElt CyclotomicElt::from_int(PadicRing ring, int level, Residue c) {
    CyclotomicElt e(ring, level);
    e.c_[0] = ring.reduce(c);
    return e;
}

CyclotomicElt CyclotomicElt::x_power(PadicRing ring, int level, long e) {
    CyclotomicElt out(ring, level);
    long k = ((e % out.order_) + out.order_) % out.order_;
    std::vector<Residue> wide(out.order_, 0);
    wide[k] = 1;
    out.reduce_from(std::move(wide));
    return out;
}

CyclotomicElt CyclotomicElt::operator+(const CyclotomicElt& o) const {
    CyclotomicElt out = *this;
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = ring_.add(c_[i], o.c_[i]);
    return out;
}

CyclotomicElt CyclotomicElt::operator-(const CyclotomicElt& o) const {
    CyclotomicElt out = *this;
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = ring_.sub(c_[i], o.c_[i]);
    return out;
}

CyclotomicElt CyclotomicElt::operator*(const CyclotomicElt& o) const {
    if (level_ != o.level_ || !(ring_ == o.ring_)) throw DomainError("cyclotomic rings differ");
    std::vector<__int128> acc(2 * c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < c_.size(); ++j) acc[i + j] += static_cast<__int128>(c_[i]) * o.c_[j];
        if (i % 4 == 3)
            for (auto& v : acc) v %= ring_.modulus;
    }
    std::vector<Residue> wide(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) wide[i] = ring_.reduce(acc[i]);
    CyclotomicElt out(ring_, level_);
    out.reduce_from(std::move(wide));
    return out;
}

CyclotomicElt CyclotomicElt::scaled(Residue c) const {
    CyclotomicElt out = *this;
    for (auto& v : out.c_) v = ring_.mul(v, ring_.reduce(c));
    return out;
}

bool CyclotomicElt::operator==(const CyclotomicElt& o) const {
    return level_ == o.level_ && ring_ == o.ring_ && c_ == o.c_;
}

CyclotomicElt CyclotomicElt::galois(long k) const {
    if (std::gcd(k, static_cast<long>(ring_.p)) != 1) throw DomainError("Galois index must be prime to p");
    std::vector<Residue> wide(order_, 0);
    long kk = ((k % order_) + order_) % order_;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        long idx = static_cast<long>((static_cast<__int128>(i) * kk) % order_);
        wide[idx] = ring_.add(wide[idx], c_[i]);
    }
    CyclotomicElt out(ring_, level_);
    out.reduce_from(std::move(wide));
    return out;
}

Residue CyclotomicElt::trace() const {
    CyclotomicElt acc(ring_, level_);
    for (long k = 1; k < order_; ++k)
        if (k % ring_.p != 0) acc = acc + galois(k);
    return acc.rational_value();
}

bool CyclotomicElt::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Residue CyclotomicElt::rational_value() const {
    if (!is_rational()) throw NotRational("cyclotomic element is not in the base ring");
    return c_[0];
}

// ---------------------------------------------------------------- measures

TruncatedSeries2 invariant_derive(const TruncatedSeries2& f, Var var) {
    const PadicRing& R = f.ring();
    TruncatedSeries2 out(R, f.degS(), f.degT());
    if (var == Var::S) {
        for (int j = 0; j <= f.degT(); ++j) {
            std::vector<Residue> col(f.degS() + 1);
            for (int i = 0; i <= f.degS(); ++i) col[i] = f.coeff(i, j);
            col = derive_poly(col, R);
            for (int i = 0; i <= f.degS(); ++i) out.set(i, j, col[i]);
        }
    } else {
        for (int i = 0; i <= f.degS(); ++i) {
            std::vector<Residue> row(f.degT() + 1);
            for (int j = 0; j <= f.degT(); ++j) row[j] = f.coeff(i, j);
            row = derive_poly(row, R);
            for (int j = 0; j <= f.degT(); ++j) out.set(i, j, row[j]);
        }
    }
    return out;
}

MeasureMoments moments(const TruncatedSeries2& f, int K, int L) {
    if (K < 0 || L < 0) throw DomainError("negative moment order");
    const PadicRing& R = f.ring();
    MeasureMoments out;
    out.p = R.p;
    out.prec = R.M;
    out.m.assign(K + 1, std::vector<Residue>(L + 1, 0));
    TruncatedSeries2 g = f;
    for (int k = 0; k <= K; ++k) {
        // d_T commutes with S = 0
        std::vector<Residue> row(g.degT() + 1);
        for (int j = 0; j <= g.degT(); ++j) row[j] = g.coeff(0, j);
        for (int l = 0; l <= L; ++l) {
            out.m[k][l] = row[0];
            row = derive_poly(row, R);
        }
        if (k < K) g = invariant_derive(g, Var::S);
    }
    return out;
}

Residue moment(const TruncatedSeries2& f, int k, int l) { return moments(f, k, l).m[k][l]; }

TruncatedSeries2 p_part_S(const TruncatedSeries2& f) {
    return divide_by_p_power(sum_over_roots(lifted(f, 1)), 1);
}

TruncatedSeries2 restrict_unit_S(const TruncatedSeries2& f) {
    return f - p_part_S(f);
}

TruncatedSeries2 pushforward_p(const TruncatedSeries2& f, int max_degree) {
    const PadicRing& R = f.ring();
    const int p = R.p;
    if (static_cast<long>(f.degS()) * p > max_degree)
        throw DegreeExhausted("pushforward would need S-degree " + std::to_string(f.degS() * p));
    TruncatedSeries2 v = TruncatedSeries2::dirac(R, p, 0) - TruncatedSeries2::constant(R, 1);
    TruncatedSeries2 out(R, f.degS() * p, f.degT());
    TruncatedSeries2 power = TruncatedSeries2::constant(R, 1);
    for (int i = 0; i <= f.degS(); ++i) {
        for (int m = 0; m <= power.degS(); ++m) {
            Residue pm = power.coeff(m, 0);
            if (pm == 0) continue;
            for (int j = 0; j <= f.degT(); ++j)
                out.set(m, j, R.add(out.coeff(m, j), R.mul(pm, f.coeff(i, j))));
        }
        if (i < f.degS()) power = power * v;
    }
    return out;
}

TruncatedSeries2 measure_eval(const TruncatedSeries2& f, int level_n, long a, Var var) {
    if (var == Var::T) return transpose(measure_eval(transpose(f), level_n, a, Var::S));
    if (level_n < 0) throw DomainError("negative level");
    if (level_n > 6) throw DomainError("measure_eval supports levels up to 6");
    const TruncatedSeries2 F = lifted(f, level_n);
    const PadicRing& R = F.ring();
    TruncatedSeries2 total(R, 0, f.degT());
    for (int j = 0; j <= f.degT(); ++j) total.set(0, j, f.coeff(0, j));
    for (int lev = 1; lev <= level_n; ++lev) {
        CyclotomicElt y = CyclotomicElt::x_power(R, lev, 1) - CyclotomicElt::from_int(R, lev, 1);
        CyclotomicElt twist = CyclotomicElt::x_power(R, lev, -a);
        const long order = ipow(R.p, lev);
        for (int j = 0; j <= f.degT(); ++j) {
            CyclotomicElt h(R, lev);
            for (int i = f.degS(); i >= 0; --i)
                h = h * y + CyclotomicElt::from_int(R, lev, f.coeff(i, j));
            h = h * twist;
            CyclotomicElt acc(R, lev);
            for (long k = 1; k < order; ++k)
                if (k % R.p != 0) acc = acc + h.galois(k);
            if (!acc.is_rational()) throw NotRational("conjugate sum left the base ring");
            total.set(0, j, R.add(total.coeff(0, j), acc.rational_value()));
        }
    }
    return divide_by_p_power(total, level_n);
}

KummerReport kummer_check(const MeasureMoments& mm) {
    PadicRing R(mm.p, mm.prec);
    const int p = mm.p;
    const int K = static_cast<int>(mm.m.size()) - 1;
    if (K < p) throw DomainError("moment grid needs K >= p");
    const int L = static_cast<int>(mm.m[0].size()) - 1;
    KummerReport rep;
    auto vp_factorial = [&](int n) {
        int v = 0;
        for (long q = p; q <= n; q *= p) v += n / q;
        return v;
    };
    for (int l = 0; l <= L; ++l) {
        // signed Stirling numbers of the first kind, row by row
        std::vector<Residue> st{1};
        for (int n = 1; n <= K; ++n) {
            std::vector<Residue> next(n + 1, 0);
            for (int k = 1; k <= n; ++k) {
                Residue v = st.size() > static_cast<size_t>(k - 1) ? st[k - 1] : 0;
                if (k < static_cast<int>(st.size())) v = R.sub(v, R.mul(n - 1, st[k]));
                next[k] = v;
            }
            st = next;
            int need = std::min(vp_factorial(n), R.M);
            Residue sum = 0;
            for (int k = 0; k <= n; ++k) sum = R.add(sum, R.mul(st[k], mm.m[k][l]));
            ++rep.checked;
            if (R.valuation(sum) < need) rep.violations.push_back({"mahler", l, n, n, need});
        }
        for (int k = 0; k <= K; ++k)
            for (int k2 = k + 1; k2 <= K; ++k2) {
                int diff = k2 - k;
                if (diff % (p - 1) != 0) continue;
                int v = 0;
                for (int q = diff / (p - 1); q % p == 0; q /= p) ++v;
                int need = std::min(v + 1, R.M);
                ++rep.checked;
                if (R.valuation(R.sub(mm.m[k][l], mm.m[k2][l])) < need)
                    rep.violations.push_back({"kummer", l, k, k2, need});
            }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

bool frobenius_relation_holds(const TruncatedSeries2& theta, const CoefficientMap& frob) {
    TruncatedSeries2 lhs = frob(pushforward_p(theta)).scaled(theta.p());
    TruncatedSeries2 rhs = sum_over_roots(theta);
    return lhs.congruent(rhs);
}

// ---------------------------------------------------------------- I/O

void write_series(std::ostream& os, const TruncatedSeries2& f) {
    os << f.p() << ' ' << f.prec() << ' ' << f.degS() << ' ' << f.degT() << '\n';
    for (int i = 0; i <= f.degS(); ++i) {
        for (int j = 0; j <= f.degT(); ++j) os << (j ? " " : "") << f.coeff(i, j);
        os << '\n';
    }
}

TruncatedSeries2 read_series(std::istream& is) {
    auto fail = [](int line, const std::string& msg) -> ParseError {
        return ParseError("series line " + std::to_string(line) + ": " + msg);
    };
    auto parse_int = [&](const std::string& tok, int line) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw fail(line, "'" + tok + "' is not an integer");
        return v;
    };
    std::string text;
    int line_no = 1;
    if (!std::getline(is, text)) throw fail(1, "missing header");
    std::vector<long long> hdr;
    {
        std::istringstream hs(text);
        std::string tok;
        while (hs >> tok) hdr.push_back(parse_int(tok, 1));
    }
    if (hdr.size() != 4) throw fail(1, "header must be 'p M degS degT'");
    if (hdr[2] < 0 || hdr[3] < 0 || hdr[2] > 100000 || hdr[3] > 100000)
        throw fail(1, "bad degrees");
    PadicRing R;
    try {
        R = PadicRing(static_cast<int>(hdr[0]), static_cast<int>(hdr[1]));
    } catch (const DomainError& e) {
        throw fail(1, e.what());
    }
    const int dS = static_cast<int>(hdr[2]), dT = static_cast<int>(hdr[3]);
    TruncatedSeries2 f(R, dS, dT);
    const long total = static_cast<long>(dS + 1) * (dT + 1);
    long got = 0;
    while (std::getline(is, text)) {
        ++line_no;
        std::istringstream ls(text);
        std::string tok;
        while (ls >> tok) {
            if (got == total) throw fail(line_no, "trailing data after coefficients");
            long long v = parse_int(tok, line_no);
            f.set(static_cast<int>(got / (dT + 1)), static_cast<int>(got % (dT + 1)), R.reduce(v));
            ++got;
        }
    }
    if (got != total)
        throw fail(line_no, "expected " + std::to_string(total) + " coefficients, found " +
                                std::to_string(got));
    return f;
}

}  // namespace kron
