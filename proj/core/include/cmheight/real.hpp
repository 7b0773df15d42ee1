#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <string>

namespace cmheight {

// RAII wrapper over mpfr_t. Every value carries its own precision; binary
// operations produce a result at the larger of the two operand precisions.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128);
    Real(long n, mpfr_prec_t prec);
    Real(const mpz_class& z, mpfr_prec_t prec);
    Real(const mpq_class& q, mpfr_prec_t prec);
    static Real parse(const std::string& decimal, mpfr_prec_t prec);

    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    // Round to a new precision in place.
    void round_to(mpfr_prec_t prec);

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Base-2 exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
    long exponent() const;

    // Scientific decimal with the given number of significant digits.
    std::string to_string(int digits) const;
    // As many digits as the precision carries.
    std::string to_string() const;

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long n);
    Real& operator/=(long n);
    Real operator-() const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator*(const Real& a, long n);
    friend Real operator*(long n, const Real& a);
    friend Real operator/(const Real& a, long n);
    friend Real operator+(const Real& a, long n);
    friend Real operator-(const Real& a, long n);

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b);
    friend bool operator<(const Real& a, long n) { return mpfr_cmp_si(a.v_, n) < 0; }
    friend bool operator>(const Real& a, long n) { return mpfr_cmp_si(a.v_, n) > 0; }

private:
    mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow_si(const Real& x, long n);
// 2^e at the given precision.
Real pow2(long e, mpfr_prec_t prec);
Real log_integer(const mpz_class& n, mpfr_prec_t prec);
Real max(const Real& a, const Real& b);

Real const_pi(mpfr_prec_t prec);
Real const_euler(mpfr_prec_t prec);
Real const_log2(mpfr_prec_t prec);

class Complex {
public:
    Real re;
    Real im;

    explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    explicit Complex(Real r) : re(std::move(r)), im(re.prec()) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    void round_to(mpfr_prec_t prec);

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator*=(const Real& r);
    Complex& operator/=(const Complex& o);
    Complex operator-() const;

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator*(Complex a, const Real& r) { return a *= r; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);
Complex exp(const Complex& z);
// Principal branch.
Complex log(const Complex& z);
// x^s = exp(s log x) for real x > 0.
Complex pow(const Real& x, const Complex& s);
// exp(2 pi i k / n).
Complex root_of_unity(long k, long n, mpfr_prec_t prec);

}  // namespace cmheight
