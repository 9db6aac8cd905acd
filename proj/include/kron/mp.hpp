#pragma once
// Multiprecision real/complex values on top of MPFR.
//
// Every new Real is created at the calling thread's working precision,
// which PrecisionGuard sets for a scope.

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace kron {

mpfr_prec_t working_precision();

class PrecisionGuard {
public:
    explicit PrecisionGuard(mpfr_prec_t bits);
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    mpfr_prec_t saved_;
};

class Real {
public:
    Real();
    Real(int v);
    Real(long v);
    Real(long long v);
    Real(unsigned long v);
    Real(double v);
    explicit Real(const std::string& text, int base = 10);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    ~Real();

    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    long exponent2() const;  // floor(log2|x|)+1, very negative for 0

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long o);
    Real& operator/=(long o);

    // Exact round-trip text (hex mantissa, binary exponent).
    std::string to_exact_string() const;
    static Real from_exact_string(const std::string& s);
    // Scientific notation with `digits` significant decimal digits.
    std::string to_decimal(int digits) const;

private:
    mpfr_t v_;
};

Real operator-(const Real& a);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator/(const Real& a, long b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator!=(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
void sin_cos(const Real& x, Real& s, Real& c);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
Real round(const Real& x);
Real ldexp(const Real& x, long e);
Real pow(const Real& x, long n);
Real pow(const Real& x, const Real& y);
Real hypot(const Real& x, const Real& y);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real gamma(const Real& x);
Real lgamma(const Real& x);
Real factorial(unsigned long n);
Real binomial(unsigned long n, unsigned long k);
Real const_pi();
Real const_euler();
Real const_log2();
Real epsilon();  // 2^(1 - working precision)

struct Complex {
    Real re;
    Real im;

    Complex() = default;
    Complex(const Real& r) : re(r), im(0) {}
    Complex(int r) : re(r), im(0) {}
    Complex(long r) : re(r), im(0) {}
    Complex(double r) : re(r), im(0) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& o);
    Complex& operator/=(const Real& o);

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator*(const Complex& a, long b);
Complex operator*(long a, const Complex& b);
Complex operator/(const Complex& a, long b);

Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex pow(const Complex& z, long n);
Complex pow(const Complex& z, const Complex& w);  // principal branch
Complex expi(const Real& theta);                  // e^{i theta}
Complex mul_i(const Complex& z);                  // i*z
Complex polar(const Real& r, const Real& theta);

// Small expression syntax: numbers, i, + - * / ^int, parentheses, sqrt(...).
// Examples: "i", "2i", "0.5+0.25i", "(1+i*sqrt(3))/2". Throws ParseError.
Complex parse_complex(const std::string& text);

}  // namespace kron
