#include "cmheight/arith.hpp"

#include <algorithm>
#include <string>

namespace cmheight::arith {

namespace {

constexpr int kBernoulliMax = 80;

std::vector<mpq_class> compute_bernoulli(int nmax) {
    // Akiyama-Tanigawa; yields B_1 = +1/2, flipped below.
    std::vector<mpq_class> a(nmax + 1), b(nmax + 1);
    for (int m = 0; m <= nmax; ++m) {
        a[m] = mpq_class(1, m + 1);
        for (int j = m; j >= 1; --j) {
            a[j - 1] = j * (a[j - 1] - a[j]);
            a[j - 1].canonicalize();
        }
        b[m] = a[0];
    }
    b[1] = mpq_class(-1, 2);
    return b;
}

long first_shift(const PrecisionContext& ctx, const HurwitzOptions& opt) {
    if (opt.shift > 0) return opt.shift;
    return std::max<long>((ctx.bits() + 1) / 2, 30);
}

// B_{2j}/(2j)! for j = 1..J+1 at the given precision.
std::vector<Real> bernoulli_coefficients(int J, mpfr_prec_t prec) {
    std::vector<Real> c;
    c.reserve(J + 1);
    mpz_class fact = 1;
    int k = 0;
    for (int j = 1; j <= J + 1; ++j) {
        while (k < 2 * j) {
            ++k;
            fact *= k;
        }
        mpq_class q = bernoulli(2 * j) / mpq_class(fact);
        c.emplace_back(q, prec);
    }
    return c;
}

void check_x(const Real& x) {
    if (!(x > 0) || x > 1 || !x.is_finite())
        throw DomainError("hurwitz_zeta: x must lie in (0, 1]");
}

}  // namespace

PrecisionContext::PrecisionContext(int bits) : bits_(bits), eps_(bits) {
    if (bits < kMinBits)
        throw DomainError("precision must be at least 64 bits, got " + std::to_string(bits));
    eps_ = cmheight::pow2(16 - bits, bits);
}

PrecisionContext::PrecisionContext(int bits, const Real& eps) : PrecisionContext(bits) {
    if (!(eps > 0)) throw DomainError("eps must be positive");
    eps_ = eps;
}

const std::vector<mpq_class>& bernoulli_numbers() {
    static const std::vector<mpq_class> table = compute_bernoulli(kBernoulliMax);
    return table;
}

mpq_class bernoulli(int n) {
    if (n < 0 || n > kBernoulliMax) throw DomainError("bernoulli index out of range");
    return bernoulli_numbers()[n];
}

Real log_gamma(const Real& x, const PrecisionContext& ctx) {
    if (!(x > 0)) throw DomainError("log_gamma: argument must be positive");
    Real r(ctx.work_prec());
    mpfr_lngamma(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real log_gamma(const mpq_class& x, const PrecisionContext& ctx) {
    if (x <= 0) throw DomainError("log_gamma: argument must be positive");
    return log_gamma(Real(x, ctx.work_prec() + 16), ctx);
}

Complex log_gamma(const Complex& z_in, const PrecisionContext& ctx) {
    if (z_in.im.is_zero()) return Complex(log_gamma(z_in.re, ctx), Real(ctx.work_prec()));
    if (!(z_in.re > 0)) throw DomainError("log_gamma: complex argument needs Re z > 0");
    const mpfr_prec_t p = ctx.work_prec();
    constexpr int J = 20;
    const Real target = pow2(-(ctx.bits() + 8), p);
    const Real half_log_2pi = log(const_pi(p) * 2) / 2;
    // log Gamma(w) ~ (w - 1/2) log w - w + log(2 pi)/2 + sum B_2k / (2k (2k-1) w^(2k-1))
    long M = std::max<long>(ctx.bits() / 2, 16);
    for (int attempt = 0; attempt < 8; ++attempt, M *= 2) {
        Complex z = z_in;
        z.round_to(p);
        Complex shift_sum(p);
        for (long j = 0; j < M; ++j) {
            Complex t = z;
            t.re += Real(j, p);
            shift_sum += log(t);
        }
        Complex w = z;
        w.re += Real(M, p);
        Complex lw = log(w);
        Complex wm = w;
        wm.re -= Real(1, p) / 2;
        Complex r = wm * lw - w;
        r.re += half_log_2pi;
        Complex inv = Complex(Real(1, p), Real(p)) / w;
        Complex inv2 = inv * inv;
        Complex pw = inv;
        for (int k = 1; k <= J + 1; ++k) {
            Real c(bernoulli(2 * k) / mpq_class(2 * k * (2 * k - 1)), p);
            if (k == J + 1) {
                Real tail = abs(pw) * abs(c);
                // Stirling remainder is bounded by the first omitted term times sec^(2J+2)(arg w / 2).
                Real a(p);
                mpfr_atan2(a.get(), w.im.get(), w.re.get(), MPFR_RNDN);
                Real sc = cos(a / 2);
                tail /= pow_si(sc, 2 * J + 2);
                if (tail <= target * abs(r)) return r - shift_sum;
                break;
            }
            r += pw * c;
            pw *= inv2;
        }
    }
    throw PrecisionError("log_gamma: Stirling tail bound not met");
}

Real digamma_half(const PrecisionContext& ctx) {
    mpfr_prec_t p = ctx.work_prec();
    Real r = -const_euler(p) - const_log2(p) * 2;
    return r;
}

Real hurwitz_zeta(const Real& s_in, const Real& x_in, const PrecisionContext& ctx,
                  const HurwitzOptions& opt) {
    check_x(x_in);
    if (mpfr_cmp_si(s_in.get(), 1) == 0) throw PoleError("hurwitz_zeta: pole at s = 1");
    const mpfr_prec_t p = ctx.work_prec();
    const int J = opt.bernoulli_terms;
    const std::vector<Real> bc = bernoulli_coefficients(J, p);
    Real s = s_in;
    s.round_to(std::max(p, s.prec()));
    Real x = x_in;
    x.round_to(std::max(p, x.prec()));
    const Real target = pow2(-(ctx.bits() + 8), p);

    long N = first_shift(ctx, opt);
    Real neg_s = -s;
    for (int attempt = 0; attempt <= opt.max_doublings; ++attempt, N *= 2) {
        Real sum(p), t(p), y(p);
        for (long n = 0; n < N; ++n) {
            mpfr_add_si(y.get(), x.get(), n, MPFR_RNDN);
            mpfr_pow(t.get(), y.get(), neg_s.get(), MPFR_RNDN);
            sum += t;
        }
        mpfr_add_si(y.get(), x.get(), N, MPFR_RNDN);
        Real w = pow(y, neg_s);  // y^-s
        sum += y * w / (s - 1);
        sum += w / 2;
        Real y2 = y * y;
        Real pj = s * w / y;  // (s)_1 y^{-s-1}
        for (int j = 1; j <= J; ++j) {
            sum += bc[j - 1] * pj;
            pj *= (s + (2 * j - 1));
            pj *= (s + 2 * j);
            pj /= y2;
        }
        // pj now holds (s)_{2J+1} y^{-s-2J-1}.
        Real tail = abs(bc[J] * pj);
        Real sig = s + (2 * J + 1);
        if (sig > 0) {
            tail *= abs(sig);
            tail /= sig;
        } else {
            tail = Real(p);
            mpfr_set_inf(tail.get(), 1);
        }
        if (tail.is_zero() || tail <= target * abs(sum)) return sum;
    }
    throw PrecisionError("hurwitz_zeta: Euler-Maclaurin tail bound not met");
}

Complex hurwitz_zeta(const Complex& s_in, const Real& x_in, const PrecisionContext& ctx,
                     const HurwitzOptions& opt) {
    if (s_in.im.is_zero()) {
        Real v = hurwitz_zeta(s_in.re, x_in, ctx, opt);
        return Complex(std::move(v), Real(ctx.work_prec()));
    }
    check_x(x_in);
    const mpfr_prec_t p = ctx.work_prec();
    const int J = opt.bernoulli_terms;
    const std::vector<Real> bc = bernoulli_coefficients(J, p);
    Complex s = s_in;
    s.round_to(std::max(p, s.prec()));
    Real x = x_in;
    x.round_to(std::max(p, x.prec()));
    const Real target = pow2(-(ctx.bits() + 8), p);
    const Complex neg_s = -s;
    Complex s_minus_1 = s;
    s_minus_1.re -= Real(1, p);

    long N = first_shift(ctx, opt);
    for (int attempt = 0; attempt <= opt.max_doublings; ++attempt, N *= 2) {
        Complex sum(p);
        Real y(p);
        for (long n = 0; n < N; ++n) {
            mpfr_add_si(y.get(), x.get(), n, MPFR_RNDN);
            sum += pow(y, neg_s);
        }
        mpfr_add_si(y.get(), x.get(), N, MPFR_RNDN);
        Complex w = pow(y, neg_s);
        sum += w * y / s_minus_1;
        Complex half = w;
        half.re /= 2;
        half.im /= 2;
        sum += half;
        Real y2 = y * y;
        Complex pj = s * w;
        pj.re /= y;
        pj.im /= y;
        for (int j = 1; j <= J; ++j) {
            sum += pj * bc[j - 1];
            Complex a = s, b = s;
            a.re += Real(2 * j - 1, p);
            b.re += Real(2 * j, p);
            pj *= a;
            pj *= b;
            pj.re /= y2;
            pj.im /= y2;
        }
        Real tail = abs(pj) * abs(bc[J]);
        Complex last = s;
        last.re += Real(2 * J + 1, p);
        if (last.re > 0) {
            tail *= abs(last);
            tail /= last.re;
        } else {
            mpfr_set_inf(tail.get(), 1);
        }
        if (tail.is_zero() || tail <= target * abs(sum)) return sum;
    }
    throw PrecisionError("hurwitz_zeta: Euler-Maclaurin tail bound not met");
}

}  // namespace cmheight::arith
