#include "kron/special.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "kron/errors.hpp"

namespace kron {

std::optional<long> as_integer(const Complex& s) {
    if (!s.im.is_zero()) return std::nullopt;
    if (!mpfr_integer_p(s.re.get())) return std::nullopt;
    if (!mpfr_fits_slong_p(s.re.get(), MPFR_RNDN)) return std::nullopt;
    return s.re.to_long();
}

Real bernoulli_2k(int k) {
    thread_local std::map<std::pair<int, long>, Real> cache;
    auto key = std::make_pair(k, static_cast<long>(working_precision()));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
    Real z;
    mpfr_zeta_ui(z.get(), 2 * k, MPFR_RNDN);
    Real b = z * factorial(2 * k) * 2L / pow(const_pi() * 2L, static_cast<long>(2 * k));
    if (k % 2 == 0) b = -b;
    cache.emplace(key, b);
    return b;
}

namespace {

Complex lgamma_stirling(const Complex& z) {
    // z has large real part.
    Real pi = const_pi();
    Complex lz = log(z);
    Complex res = (z - Complex(Real(1) / 2L)) * lz - z + Complex(log(pi * 2L) / 2L);
    Complex zinv = Complex(1) / z;
    Complex zinv2 = zinv * zinv;
    Complex p = zinv;
    Real eps = epsilon();
    Real scale = abs(res);
    for (int k = 1; k < 1000; ++k) {
        Complex term = p * (bernoulli_2k(k) / static_cast<long>((2 * k) * (2 * k - 1)));
        res += term;
        if (abs(term) < eps * scale) break;
        p *= zinv2;
    }
    return res;
}

}  // namespace

Complex lgamma(const Complex& s) {
    if (auto n = as_integer(s); n && *n <= 0) throw PoleError("Gamma pole at nonpositive integer");
    PrecisionGuard g(working_precision() + 16);
    if (s.im.is_zero()) {
        Real r;
        int sgn;
        mpfr_lgamma(r.get(), &sgn, s.re.get(), MPFR_RNDN);
        return Complex(r, sgn < 0 ? const_pi() : Real(0));
    }
    Real pi = const_pi();
    if (s.re < Real(1) / 2L) {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        return Complex(log(pi)) - log(sin(s * pi)) - lgamma(Complex(1) - s);
    }
    double target = 0.12 * static_cast<double>(working_precision()) + 10.0;
    long shift = 0;
    double re = s.re.to_double();
    if (re < target) shift = static_cast<long>(std::ceil(target - re));
    Complex prod(1);
    for (long j = 0; j < shift; ++j) prod *= s + Complex(j);
    Complex z = s + Complex(shift);
    return lgamma_stirling(z) - log(prod);
}

Complex gamma(const Complex& s) {
    if (auto n = as_integer(s)) {
        if (*n <= 0) throw PoleError("Gamma pole at nonpositive integer");
        return Complex(factorial(*n - 1));
    }
    if (s.im.is_zero()) return Complex(gamma(s.re));
    return exp(lgamma(s));
}

Complex rgamma(const Complex& s) {
    if (auto n = as_integer(s)) {
        if (*n <= 0) return Complex();
        return Complex(Real(1) / factorial(*n - 1));
    }
    if (s.im.is_zero()) return Complex(Real(1) / gamma(s.re));
    return exp(-lgamma(s));
}

Real expint_e1(const Real& x) {
    if (x.sign() <= 0) throw DomainError("E1 needs x > 0");
    // mpfr_eint(-x) = Ei(-x) = -E1(x)
    Real r;
    mpfr_eint(r.get(), (-x).get(), MPFR_RNDN);
    return -r;
}

namespace {

Complex upper_gamma_cf(const Complex& s, const Real& x) {
    // Legendre continued fraction, modified Lentz.
    Real tiny = ldexp(Real(1), -10 * static_cast<long>(working_precision()));
    Real eps = epsilon() * 4L;
    Complex b = Complex(x + 1L) - s;
    Complex f = b.is_zero() ? Complex(tiny) : b;
    Complex C = f, D;
    for (long n = 1; n < 2000000; ++n) {
        Complex a = -(Complex(n) - s) * n;
        b = b + Complex(2);
        D = b + a * D;
        if (D.is_zero()) D = Complex(tiny);
        C = b + a / C;
        if (C.is_zero()) C = Complex(tiny);
        D = Complex(1) / D;
        Complex delta = C * D;
        f *= delta;
        if (abs(delta - Complex(1)) < eps) {
            return exp(Complex(-x) + s * Complex(log(x))) / f;
        }
    }
    throw NotConvergent("incomplete gamma continued fraction");
}

Complex lower_gamma_series(const Complex& s, const Real& x) {
    // gamma(s,x) = x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n))
    Complex term = Complex(1) / s;
    Complex sum = term;
    Real eps = epsilon();
    for (long n = 1; n < 1000000; ++n) {
        term = term * x / (s + Complex(n));
        sum += term;
        if (abs(term) < eps * abs(sum) && Real(n) > x) break;
    }
    return exp(Complex(-x) + s * Complex(log(x))) * sum;
}

}  // namespace

Complex upper_gamma(const Complex& s, const Real& x) {
    if (x.sign() <= 0) throw DomainError("upper_gamma needs x > 0");
    const mpfr_prec_t out_prec = working_precision();
    auto n = as_integer(s);
    if (n && *n >= 1) {
        // (n-1)! e^{-x} sum_{j<n} x^j/j!
        PrecisionGuard g(out_prec + 8);
        Real term(1), sum(1);
        for (long j = 1; j < *n; ++j) {
            term = term * x / j;
            sum += term;
        }
        Complex r(factorial(*n - 1) * exp(-x) * sum);
        PrecisionGuard back(out_prec);
        return r * Real(1);
    }
    double xd = x.to_double();
    double sabs = abs(s).to_double();
    bool use_cf = xd >= 8.0 + sabs;
    if (use_cf) {
        PrecisionGuard g(out_prec + 16);
        Complex r = upper_gamma_cf(s, x);
        PrecisionGuard back(out_prec);
        return r * Real(1);
    }
    long guard = static_cast<long>(1.5 * xd + 2.0 * sabs) + 64;
    PrecisionGuard g(out_prec + guard);
    Complex r;
    if (n) {
        // Gamma(-m, x) = (-1)^m/m! [E1(x) - e^{-x} sum_{j<m} (-1)^j j!/x^{j+1}]
        long m = -*n;
        Real sum;
        Real ex = exp(-x);
        Real fact(1), xp = x;
        for (long j = 0; j < m; ++j) {
            if (j > 0) { fact *= j; xp *= x; }
            Real t = fact / xp;
            if (j % 2) sum -= t; else sum += t;
        }
        Real v = (expint_e1(x) - ex * sum) / factorial(m);
        if (m % 2) v = -v;
        r = Complex(v);
    } else {
        r = gamma(s) - lower_gamma_series(s, x);
    }
    PrecisionGuard back(out_prec);
    return r * Real(1);
}

}  // namespace kron
