#include "kron/mp.hpp"

#include <cctype>
#include <cstdlib>
#include <memory>

#include "kron/errors.hpp"

namespace kron {

namespace {
thread_local mpfr_prec_t g_prec = 256;
constexpr mpfr_rnd_t RND = MPFR_RNDN;
}  // namespace

mpfr_prec_t working_precision() { return g_prec; }

PrecisionGuard::PrecisionGuard(mpfr_prec_t bits) : saved_(g_prec) { g_prec = bits; }
PrecisionGuard::~PrecisionGuard() { g_prec = saved_; }

// ---------------------------------------------------------------- Real

Real::Real() { mpfr_init2(v_, g_prec); mpfr_set_zero(v_, 1); }
Real::Real(int v) { mpfr_init2(v_, g_prec); mpfr_set_si(v_, v, RND); }
Real::Real(long v) { mpfr_init2(v_, g_prec); mpfr_set_si(v_, v, RND); }
Real::Real(long long v) { mpfr_init2(v_, g_prec); mpfr_set_si(v_, static_cast<long>(v), RND); }
Real::Real(unsigned long v) { mpfr_init2(v_, g_prec); mpfr_set_ui(v_, v, RND); }
Real::Real(double v) { mpfr_init2(v_, g_prec); mpfr_set_d(v_, v, RND); }

Real::Real(const std::string& text, int base) {
    mpfr_init2(v_, g_prec);
    if (mpfr_set_str(v_, text.c_str(), base, RND) != 0)
        throw ParseError("not a real number: '" + text + "'");
}

Real::Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, RND); }

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

Real::~Real() { mpfr_clear(v_); }

Real& Real::operator=(const Real& o) {
    if (this != &o) mpfr_set(v_, o.v_, RND);
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    if (mpfr_get_prec(v_) == mpfr_get_prec(o.v_))
        mpfr_swap(v_, o.v_);
    else
        mpfr_set(v_, o.v_, RND);
    return *this;
}

long Real::exponent2() const {
    if (mpfr_zero_p(v_)) return -(1L << 40);
    return mpfr_get_exp(v_);
}

Real& Real::operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, RND); return *this; }
Real& Real::operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, RND); return *this; }
Real& Real::operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, RND); return *this; }
Real& Real::operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, RND); return *this; }
Real& Real::operator*=(long o) { mpfr_mul_si(v_, v_, o, RND); return *this; }
Real& Real::operator/=(long o) { mpfr_div_si(v_, v_, o, RND); return *this; }

std::string Real::to_exact_string() const {
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 16, 0, v_, RND);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = !m.empty() && m[0] == '-';
    if (neg) m.erase(0, 1);
    while (m.size() > 1 && m.back() == '0') m.pop_back();
    // value = 0.m * 16^e
    return std::string(neg ? "-" : "") + "0." + m + "@" + std::to_string(e);
}

Real Real::from_exact_string(const std::string& s) {
    Real r;
    if (mpfr_set_str(r.v_, s.c_str(), 16, RND) != 0)
        throw ParseError("bad exact real: '" + s + "'");
    return r;
}

std::string Real::to_decimal(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    std::unique_ptr<char[]> buf;
    int n = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
    buf.reset(new char[n + 1]);
    mpfr_snprintf(buf.get(), n + 1, "%.*Re", digits - 1, v_);
    return std::string(buf.get());
}

Real operator-(const Real& a) { Real r; mpfr_neg(r.get(), a.get(), RND); return r; }
Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.get(), a.get(), b.get(), RND); return r; }
Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.get(), a.get(), b.get(), RND); return r; }
Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.get(), a.get(), b.get(), RND); return r; }
Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.get(), a.get(), b.get(), RND); return r; }
Real operator*(const Real& a, long b) { Real r; mpfr_mul_si(r.get(), a.get(), b, RND); return r; }
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(const Real& a, long b) { Real r; mpfr_div_si(r.get(), a.get(), b, RND); return r; }

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()); }
bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.get(), b.get()); }

#define KRON_UNARY(name, fn)                  \
    Real name(const Real& x) {                \
        Real r;                               \
        fn(r.get(), x.get(), RND);            \
        return r;                             \
    }
KRON_UNARY(abs, mpfr_abs)
KRON_UNARY(sqrt, mpfr_sqrt)
KRON_UNARY(exp, mpfr_exp)
KRON_UNARY(log, mpfr_log)
KRON_UNARY(sin, mpfr_sin)
KRON_UNARY(cos, mpfr_cos)
KRON_UNARY(gamma, mpfr_gamma)
#undef KRON_UNARY

void sin_cos(const Real& x, Real& s, Real& c) { mpfr_sin_cos(s.get(), c.get(), x.get(), RND); }
Real atan2(const Real& y, const Real& x) { Real r; mpfr_atan2(r.get(), y.get(), x.get(), RND); return r; }
Real floor(const Real& x) { Real r; mpfr_floor(r.get(), x.get()); return r; }
Real round(const Real& x) { Real r; mpfr_round(r.get(), x.get()); return r; }
Real ldexp(const Real& x, long e) { Real r; mpfr_mul_2si(r.get(), x.get(), e, RND); return r; }
Real pow(const Real& x, long n) { Real r; mpfr_pow_si(r.get(), x.get(), n, RND); return r; }
Real pow(const Real& x, const Real& y) { Real r; mpfr_pow(r.get(), x.get(), y.get(), RND); return r; }
Real hypot(const Real& x, const Real& y) { Real r; mpfr_hypot(r.get(), x.get(), y.get(), RND); return r; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real lgamma(const Real& x) {
    Real r;
    int sgn;
    mpfr_lgamma(r.get(), &sgn, x.get(), RND);
    return r;
}

Real factorial(unsigned long n) { Real r; mpfr_fac_ui(r.get(), n, RND); return r; }

Real binomial(unsigned long n, unsigned long k) {
    if (k > n) return Real(0);
    Real r(1);
    for (unsigned long i = 1; i <= k; ++i) {
        r *= static_cast<long>(n - k + i);
        r /= static_cast<long>(i);
    }
    return r;
}

Real const_pi() { Real r; mpfr_const_pi(r.get(), RND); return r; }
Real const_euler() { Real r; mpfr_const_euler(r.get(), RND); return r; }
Real const_log2() { Real r; mpfr_const_log2(r.get(), RND); return r; }
Real epsilon() { return ldexp(Real(1), 1 - static_cast<long>(g_prec)); }

// ---------------------------------------------------------------- Complex

Complex& Complex::operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
Complex& Complex::operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
Complex& Complex::operator*=(const Complex& o) { *this = *this * o; return *this; }
Complex& Complex::operator/=(const Complex& o) { *this = *this / o; return *this; }
Complex& Complex::operator*=(const Real& o) { re *= o; im *= o; return *this; }
Complex& Complex::operator/=(const Real& o) { re /= o; im /= o; return *this; }

Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
    Complex r;
    Real t;
    mpfr_mul(r.re.get(), a.re.get(), b.re.get(), RND);
    mpfr_mul(t.get(), a.im.get(), b.im.get(), RND);
    mpfr_sub(r.re.get(), r.re.get(), t.get(), RND);
    mpfr_mul(r.im.get(), a.re.get(), b.im.get(), RND);
    mpfr_mul(t.get(), a.im.get(), b.re.get(), RND);
    mpfr_add(r.im.get(), r.im.get(), t.get(), RND);
    return r;
}

Complex operator/(const Complex& a, const Complex& b) {
    Real d = norm(b);
    Complex r = a * conj(b);
    r.re /= d;
    r.im /= d;
    return r;
}

Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return {b.re * a, b.im * a}; }
Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
Complex operator*(const Complex& a, long b) { return {a.re * b, a.im * b}; }
Complex operator*(long a, const Complex& b) { return {b.re * a, b.im * a}; }
Complex operator/(const Complex& a, long b) { return {a.re / b, a.im / b}; }

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real norm(const Complex& z) {
    Real r, t;
    mpfr_sqr(r.get(), z.re.get(), RND);
    mpfr_sqr(t.get(), z.im.get(), RND);
    r += t;
    return r;
}

Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex expi(const Real& theta) {
    Complex r;
    sin_cos(theta, r.im, r.re);
    return r;
}

Complex polar(const Real& r, const Real& theta) { return expi(theta) * r; }

Complex exp(const Complex& z) { return polar(exp(z.re), z.im); }

Complex log(const Complex& z) {
    if (z.is_zero()) throw PoleError("log(0)");
    return {log(abs(z)), arg(z)};
}

Complex sqrt(const Complex& z) {
    if (z.is_zero()) return Complex();
    Real m = abs(z);
    Real a = sqrt((m + abs(z.re)) / 2L);
    if (z.re.sign() >= 0) return {a, z.im / (a * 2L)};
    Real b = z.im.sign() < 0 ? -a : a;
    return {abs(z.im) / (a * 2L), b};
}

Complex mul_i(const Complex& z) { return {-z.im, z.re}; }

Complex sin(const Complex& z) {
    // sin(x+iy) = sin x cosh y + i cos x sinh y
    Real s, c, sh, ch;
    sin_cos(z.re, s, c);
    mpfr_sinh_cosh(sh.get(), ch.get(), z.im.get(), RND);
    return {s * ch, c * sh};
}

Complex cos(const Complex& z) {
    Real s, c, sh, ch;
    sin_cos(z.re, s, c);
    mpfr_sinh_cosh(sh.get(), ch.get(), z.im.get(), RND);
    return {c * ch, -(s * sh)};
}

Complex pow(const Complex& z, long n) {
    if (n < 0) return Complex(1) / pow(z, -n);
    Complex result(1), base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

Complex pow(const Complex& z, const Complex& w) {
    if (z.is_zero()) {
        if (w.re.sign() > 0) return Complex();
        throw PoleError("0^w with Re w <= 0");
    }
    return exp(w * log(z));
}

// ---------------------------------------------------------------- parsing

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Complex parse() {
        Complex v = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("complex expression '" + s_ + "': " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    Complex sum() {
        Complex v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }
    Complex product() {
        Complex v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) {
                Complex d = unary();
                if (d.is_zero()) fail("division by zero");
                v /= d;
            } else {
                // implicit multiplication: "2i", "3sqrt(2)", "2(1+i)"
                skip();
                if (pos_ < s_.size() && (s_[pos_] == 'i' || s_[pos_] == 's' || s_[pos_] == '('))
                    v *= unary();
                else
                    return v;
            }
        }
    }
    Complex unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        Complex b = atom();
        if (eat('^')) {
            skip();
            size_t start = pos_;
            if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("integer exponent expected");
            b = pow(b, std::strtol(s_.substr(start, pos_ - start).c_str(), nullptr, 10));
        }
        return b;
    }
    Complex atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Complex v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (c == 'i') { ++pos_; return {Real(0), Real(1)}; }
        if (s_.compare(pos_, 4, "sqrt") == 0) {
            pos_ += 4;
            if (!eat('(')) fail("sqrt needs '('");
            Complex v = sum();
            if (!eat(')')) fail("missing ')'");
            return sqrt(v);
        }
        if (s_.compare(pos_, 2, "pi") == 0) { pos_ += 2; return Complex(const_pi()); }
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                ((s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
                 (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' ||
                  s_[pos_ + 1] == '+'))))
        {
            if ((s_[pos_] == 'e' || s_[pos_] == 'E')) ++pos_;
            ++pos_;
        }
        if (start == pos_) fail("number expected");
        return Complex(Real(s_.substr(start, pos_ - start)));
    }
};

}  // namespace

Complex parse_complex(const std::string& text) { return ExprParser(text).parse(); }

}  // namespace kron
