#include "cmheight/real.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cmheight {

namespace {

constexpr mpfr_rnd_t R = MPFR_RNDN;

mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

Real::Real(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

Real::Real(long n, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, n, R);
}

Real::Real(const mpz_class& z, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), R);
}

Real::Real(const mpq_class& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), R);
}

Real Real::parse(const std::string& decimal, mpfr_prec_t prec) {
    Real r(prec);
    if (mpfr_set_str(r.v_, decimal.c_str(), 10, R) != 0)
        throw std::invalid_argument("not a decimal number: " + decimal);
    return r;
}

Real::Real(const Real& o) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, R);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, o.prec());
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.prec());
        mpfr_set(v_, o.v_, R);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

void Real::round_to(mpfr_prec_t prec) { mpfr_prec_round(v_, prec, R); }

long Real::exponent() const {
    if (mpfr_zero_p(v_)) return -(1L << 40);
    return mpfr_get_exp(v_);
}

std::string Real::to_string(int digits) const {
    if (!mpfr_number_p(v_)) {
        if (mpfr_nan_p(v_)) return "nan";
        return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    }
    if (mpfr_zero_p(v_)) return "0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

std::string Real::to_string() const {
    int digits = static_cast<int>(std::ceil(static_cast<double>(prec()) * 0.30102999566398120)) + 1;
    return to_string(digits);
}

Real& Real::operator+=(const Real& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), R);
    mpfr_add(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator-=(const Real& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), R);
    mpfr_sub(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator*=(const Real& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), R);
    mpfr_mul(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator/=(const Real& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), R);
    mpfr_div(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator*=(long n) {
    mpfr_mul_si(v_, v_, n, R);
    return *this;
}

Real& Real::operator/=(long n) {
    mpfr_div_si(v_, v_, n, R);
    return *this;
}

Real Real::operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, R);
    return r;
}

Real operator+(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_add(r.v_, a.v_, b.v_, R);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, R);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, R);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_div(r.v_, a.v_, b.v_, R);
    return r;
}

Real operator*(const Real& a, long n) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, n, R);
    return r;
}

Real operator*(long n, const Real& a) { return a * n; }

Real operator/(const Real& a, long n) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, n, R);
    return r;
}

Real operator+(const Real& a, long n) {
    Real r(a.prec());
    mpfr_add_si(r.v_, a.v_, n, R);
    return r;
}

Real operator-(const Real& a, long n) {
    Real r(a.prec());
    mpfr_sub_si(r.v_, a.v_, n, R);
    return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

Real abs(const Real& x) {
    Real r(x.prec());
    mpfr_abs(r.get(), x.get(), R);
    return r;
}

Real sqrt(const Real& x) {
    Real r(x.prec());
    mpfr_sqrt(r.get(), x.get(), R);
    return r;
}

Real log(const Real& x) {
    Real r(x.prec());
    mpfr_log(r.get(), x.get(), R);
    return r;
}

Real exp(const Real& x) {
    Real r(x.prec());
    mpfr_exp(r.get(), x.get(), R);
    return r;
}

Real sin(const Real& x) {
    Real r(x.prec());
    mpfr_sin(r.get(), x.get(), R);
    return r;
}

Real cos(const Real& x) {
    Real r(x.prec());
    mpfr_cos(r.get(), x.get(), R);
    return r;
}

Real pow(const Real& x, const Real& y) {
    Real r(wider(x, y));
    mpfr_pow(r.get(), x.get(), y.get(), R);
    return r;
}

Real pow_si(const Real& x, long n) {
    Real r(x.prec());
    mpfr_pow_si(r.get(), x.get(), n, R);
    return r;
}

Real pow2(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_ui_2exp(r.get(), 1, e, R);
    return r;
}

Real log_integer(const mpz_class& n, mpfr_prec_t prec) {
    if (n <= 0) throw std::domain_error("log of non-positive integer");
    Real x(n, prec + 64);
    Real r = log(x);
    r.round_to(prec);
    return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real const_pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.get(), R);
    return r;
}

Real const_euler(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_euler(r.get(), R);
    return r;
}

Real const_log2(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_log2(r.get(), R);
    return r;
}

void Complex::round_to(mpfr_prec_t prec) {
    re.round_to(prec);
    im.round_to(prec);
}

Complex& Complex::operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
}

Complex& Complex::operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

Complex& Complex::operator*=(const Complex& o) {
    Real a = re * o.re - im * o.im;
    Real b = re * o.im + im * o.re;
    re = std::move(a);
    im = std::move(b);
    return *this;
}

Complex& Complex::operator*=(const Real& r) {
    re *= r;
    im *= r;
    return *this;
}

Complex& Complex::operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real a = (re * o.re + im * o.im) / d;
    Real b = (im * o.re - re * o.im) / d;
    re = std::move(a);
    im = std::move(b);
    return *this;
}

Complex Complex::operator-() const { return Complex(-re, -im); }

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }

Real abs(const Complex& z) {
    Real r(z.prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), R);
    return r;
}

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Complex exp(const Complex& z) {
    Real m = exp(z.re);
    Real s(z.prec()), c(z.prec());
    mpfr_sin_cos(s.get(), c.get(), z.im.get(), R);
    return Complex(m * c, m * s);
}

Complex log(const Complex& z) {
    Real a(z.prec());
    mpfr_atan2(a.get(), z.im.get(), z.re.get(), R);
    return Complex(log(abs(z)), std::move(a));
}

Complex pow(const Real& x, const Complex& s) {
    Real lx = log(x);
    if (s.im.is_zero()) {
        Real r = exp(s.re * lx);
        return Complex(std::move(r), Real(s.prec()));
    }
    return exp(Complex(s.re * lx, s.im * lx));
}

Complex root_of_unity(long k, long n, mpfr_prec_t prec) {
    if (n <= 0) throw std::domain_error("root of unity order must be positive");
    k %= n;
    if (k < 0) k += n;
    // Exact values at the axis points keep parity identities exact.
    if (k == 0) return Complex(Real(1, prec), Real(prec));
    if (2 * k == n) return Complex(Real(-1, prec), Real(prec));
    if (4 * k == n) return Complex(Real(prec), Real(1, prec));
    if (4 * k == 3 * n) return Complex(Real(prec), Real(-1, prec));
    Real t = const_pi(prec + 16) * (2 * k);
    t /= n;
    Real s(prec), c(prec);
    mpfr_sin_cos(s.get(), c.get(), t.get(), R);
    return Complex(std::move(c), std::move(s));
}

}  // namespace cmheight
