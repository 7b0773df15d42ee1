#include "cmheight/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

namespace cmheight::lfun {

namespace {

void require_primitive(const ResidueCharacter& chi) {
    if (dirichlet::conductor(chi) != chi.modulus()) throw DomainError("character is not primitive");
}

void require_odd_primitive(const ResidueCharacter& chi) {
    require_primitive(chi);
    if (!dirichlet::is_odd(chi)) throw DomainError("character is not odd");
}

// Values chi(a), a = 0..f-1, as complex numbers.
std::vector<Complex> value_table(const ResidueCharacter& chi, mpfr_prec_t prec) {
    std::vector<Complex> v;
    v.reserve(chi.modulus());
    for (long a = 0; a < chi.modulus(); ++a) v.push_back(chi.value(a, prec));
    return v;
}

// zeta(s, a/f) for a coprime to f; zero elsewhere. At s = 1 returns -psi(a/f),
// the finite part, which is only meaningful inside sums with sum chi(a) = 0.
std::vector<Real> hurwitz_row(long f, const Real& s, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    std::vector<Real> row(f, Real(p));
    bool at_pole = mpfr_cmp_si(s.get(), 1) == 0;
    for (long a = 1; a <= f; ++a) {
        if (std::gcd(a, f) != 1) continue;
        Real x(mpq_class(a, f), p);
        if (at_pole) {
            mpfr_digamma(row[a % f].get(), x.get(), MPFR_RNDN);
            row[a % f] = -row[a % f];
        } else {
            row[a % f] = arith::hurwitz_zeta(s, x, ctx);
        }
    }
    return row;
}

Complex combine(const std::vector<Complex>& chi_vals, const std::vector<Real>& row, mpfr_prec_t p) {
    Complex acc(p);
    for (std::size_t a = 0; a < row.size(); ++a) {
        if (chi_vals[a].re.is_zero() && chi_vals[a].im.is_zero()) continue;
        acc += chi_vals[a] * row[a];
    }
    return acc;
}

// Memo for L'/L(0).
struct LogDerivKey {
    long modulus;
    std::vector<long> exps;
    int bits;
    bool operator<(const LogDerivKey& o) const {
        return std::tie(modulus, exps, bits) < std::tie(o.modulus, o.exps, o.bits);
    }
};

std::mutex g_cache_mu;
std::map<LogDerivKey, Complex>& log_deriv_cache() {
    static std::map<LogDerivKey, Complex> cache;
    return cache;
}

using Series = std::vector<Real>;
using CSeries = std::vector<Complex>;

CSeries mul_trunc(const CSeries& a, const CSeries& b, std::size_t K, mpfr_prec_t p) {
    CSeries c(K + 1, Complex(p));
    Real t(p);
    for (std::size_t i = 0; i <= K && i < a.size(); ++i) {
        for (std::size_t j = 0; i + j <= K && j < b.size(); ++j) {
            const Complex& x = a[i];
            const Complex& y = b[j];
            mpfr_mul(t.get(), x.re.get(), y.re.get(), MPFR_RNDN);
            mpfr_add(c[i + j].re.get(), c[i + j].re.get(), t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), x.im.get(), y.im.get(), MPFR_RNDN);
            mpfr_sub(c[i + j].re.get(), c[i + j].re.get(), t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), x.re.get(), y.im.get(), MPFR_RNDN);
            mpfr_add(c[i + j].im.get(), c[i + j].im.get(), t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), x.im.get(), y.re.get(), MPFR_RNDN);
            mpfr_add(c[i + j].im.get(), c[i + j].im.get(), t.get(), MPFR_RNDN);
        }
    }
    return c;
}

Series mul_trunc_real(const Series& a, const Series& b, std::size_t K, mpfr_prec_t p) {
    Series c(K + 1, Real(p));
    Real t(p);
    for (std::size_t i = 0; i <= K && i < a.size(); ++i)
        for (std::size_t j = 0; i + j <= K && j < b.size(); ++j) {
            mpfr_mul(t.get(), a[i].get(), b[j].get(), MPFR_RNDN);
            mpfr_add(c[i + j].get(), c[i + j].get(), t.get(), MPFR_RNDN);
        }
    return c;
}

// exp(-t l) truncated at degree K.
Series exp_series(const Real& l, std::size_t K) {
    Series e;
    e.reserve(K + 1);
    Real term(1, l.prec());
    Real neg = -l;
    for (std::size_t k = 0; k <= K; ++k) {
        e.push_back(term);
        term *= neg;
        term /= static_cast<long>(k + 1);
    }
    return e;
}

// Coefficients of zeta(1 + t, x) - 1/t for t in [-radius, 0] by Euler-Maclaurin
// with each term expanded in t.
Series zeta_regular_series(const Real& x, std::size_t K, const Real& radius, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    constexpr int J = 20;
    const Real target = pow2(-(ctx.bits() + 8), p);
    long N = std::max<long>((ctx.bits() + 1) / 2, 30);
    // First omitted term over s in [1 - radius, 1]: |B_{2J+2}|/(2J+2) * y^{-(1-radius)-2J-1}.
    mpq_class bj = abs(arith::bernoulli(2 * J + 2)) / mpq_class(2 * J + 2);
    for (int attempt = 0;; ++attempt, N *= 2) {
        Real y = x + N;
        Real ex = Real(-2 * J - 2, p) + radius;
        Real bound = Real(bj, p) * pow(y, ex);
        if (bound <= target) break;
        if (attempt > 12) throw PrecisionError("zeta series: tail bound not met");
    }
    Series c(K + 1, Real(p));
    Real u(p), term(p), y(p);
    for (long n = 0; n < N; ++n) {
        mpfr_add_si(y.get(), x.get(), n, MPFR_RNDN);
        mpfr_log(u.get(), y.get(), MPFR_RNDN);
        mpfr_neg(u.get(), u.get(), MPFR_RNDN);
        mpfr_ui_div(term.get(), 1, y.get(), MPFR_RNDN);
        for (std::size_t k = 0; k <= K; ++k) {
            mpfr_add(c[k].get(), c[k].get(), term.get(), MPFR_RNDN);
            mpfr_mul(term.get(), term.get(), u.get(), MPFR_RNDN);
            mpfr_div_ui(term.get(), term.get(), k + 1, MPFR_RNDN);
        }
    }
    y = x + N;
    Real l = log(y);
    // (y^{-t} - 1)/t
    {
        Real t = -l;
        for (std::size_t k = 0; k <= K; ++k) {
            c[k] += t;
            t *= -l;
            t /= static_cast<long>(k + 2);
        }
    }
    // exp(-t l) * (1/(2y) + sum_j B_2j/(2j)! y^{-2j} (1+t)...(2j-1+t))
    Series q(K + 1, Real(p));
    q[0] = Real(1, p) / (y * 2);
    Series rising{Real(1, p), Real(1, p)};  // 1 + t
    Real y2 = y * y;
    Real ypow = Real(1, p) / y2;
    mpz_class fact = 2;
    for (int j = 1; j <= J; ++j) {
        Real coef = Real(mpq_class(arith::bernoulli(2 * j)) / mpq_class(fact), p) * ypow;
        for (std::size_t k = 0; k < rising.size() && k <= K; ++k) q[k] += coef * rising[k];
        // rising *= (2j + t)(2j + 1 + t)
        for (long a : {2L * j, 2L * j + 1}) {
            Series next(rising.size() + 1, Real(p));
            for (std::size_t k = 0; k < rising.size(); ++k) {
                next[k] += rising[k] * a;
                next[k + 1] += rising[k];
            }
            rising = std::move(next);
        }
        fact *= (2 * j + 1) * (2 * j + 2);
        ypow /= y2;
    }
    Series eq = mul_trunc_real(exp_series(l, K), q, K, p);
    for (std::size_t k = 0; k <= K; ++k) c[k] += eq[k];
    return c;
}

std::size_t series_degree(std::size_t nchars, long fmax, const Real& radius, const PrecisionContext& ctx) {
    double N = std::max(ctx.bits() / 2.0, 30.0) * 8.0;
    double ell = static_cast<double>(nchars) * (std::log(N + 1.0) + std::log(static_cast<double>(fmax)) + 1.0);
    double z = ell * radius.to_double();
    double goal = -(ctx.bits() + 32) * std::log(2.0);
    double lt = 0;
    std::size_t K = 0;
    while (true) {
        ++K;
        lt += std::log(z) - std::log(static_cast<double>(K));
        if (K > 8 && lt < goal) break;
        if (K > 2000) throw PrecisionError("Taylor model degree exceeds limit");
    }
    return K + 4;
}

Real horner_real(const Series& c, const Real& t, mpfr_prec_t p) {
    Real acc(p);
    for (std::size_t k = c.size(); k-- > 0;) {
        mpfr_mul(acc.get(), acc.get(), t.get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), c[k].get(), MPFR_RNDN);
    }
    return acc;
}

std::vector<ResidueCharacter> primitives(const std::vector<ResidueCharacter>& chars) {
    std::vector<ResidueCharacter> out;
    for (const auto& chi : chars) {
        ResidueCharacter p = dirichlet::primitive_of(chi);
        if (!dirichlet::is_odd(p)) throw DomainError("zero scan: character set must be odd");
        out.push_back(std::move(p));
    }
    return out;
}

// Complex Taylor coefficients of L(1 + t, chi) for each chi.
std::vector<CSeries> l_series(const std::vector<ResidueCharacter>& prims, std::size_t K, const Real& radius,
                              const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    std::map<long, std::vector<Series>> rows;
    for (const auto& chi : prims) {
        long f = chi.modulus();
        if (rows.count(f)) continue;
        std::vector<Series> r(f);
        for (long a = 1; a < f; ++a)
            if (std::gcd(a, f) == 1) r[a] = zeta_regular_series(Real(mpq_class(a, f), p), K, radius, ctx);
        rows.emplace(f, std::move(r));
    }
    std::vector<CSeries> out;
    for (const auto& chi : prims) {
        long f = chi.modulus();
        const auto& r = rows.at(f);
        CSeries sum(K + 1, Complex(p));
        for (long a = 1; a < f; ++a) {
            if (std::gcd(a, f) != 1) continue;
            Complex v = chi.value(a, p);
            for (std::size_t k = 0; k <= K; ++k) sum[k] += v * r[a][k];
        }
        Series pre = exp_series(log(Real(f, p)), K);
        for (auto& x : pre) x /= f;
        CSeries cpre;
        for (auto& x : pre) cpre.emplace_back(std::move(x), Real(p));
        out.push_back(mul_trunc(cpre, sum, K, p));
    }
    return out;
}

Real real_part_checked(const CSeries& c, std::vector<Real>& out, const PrecisionContext& ctx) {
    Real scale(1, ctx.work_prec());
    for (const auto& z : c) scale = max(scale, abs(z.re));
    Real worst(ctx.work_prec());
    out.clear();
    for (const auto& z : c) {
        worst = max(worst, abs(z.im));
        out.push_back(z.re);
    }
    if (worst > ctx.eps() * scale)
        throw ConsistencyError("zero scan: product is not real on the real axis");
    return worst;
}

struct GridResult {
    Real min_abs;
    long sign_changes = 0;
    long first_change = -1;
    long first_small = -1;
    long points = 0;
};

GridResult scan_grid(const Series& model, const Real& left_t, const Real& h, long M, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.bits() + 16;
    const Real thresh = pow2(-(ctx.bits() / 2), p);
    GridResult g;
    g.points = M;
    int prev_sign = 0;
    Real t(p);
    for (long i = 0; i < M; ++i) {
        mpfr_mul_si(t.get(), h.get(), i, MPFR_RNDN);
        mpfr_add(t.get(), t.get(), left_t.get(), MPFR_RNDN);
        Real v = horner_real(model, t, p);
        Real a = abs(v);
        if (i == 0 || a < g.min_abs) g.min_abs = a;
        if (a < thresh && g.first_small < 0) g.first_small = i;
        int sg = v.sign();
        if (sg != 0 && prev_sign != 0 && sg != prev_sign) {
            ++g.sign_changes;
            if (g.first_change < 0) g.first_change = i - 1;
        }
        if (sg != 0) prev_sign = sg;
    }
    return g;
}

Real bisect(const Series& model, Real lo, Real hi, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    const Real width = pow2(-(ctx.bits() / 4), p);
    int slo = horner_real(model, lo, p).sign();
    while (hi - lo > width) {
        Real mid = (lo + hi) / 2;
        int sm = horner_real(model, mid, p).sign();
        if (sm == 0) return mid;
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

// Direct value of the scanned quantity at real s, for model validation.
Real direct_product(const std::vector<ResidueCharacter>& prims, const Real& s, bool squared_norm,
                    const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    std::map<long, std::vector<Real>> rows;
    Complex prod(Real(1, p), Real(p));
    for (const auto& chi : prims) {
        long f = chi.modulus();
        auto it = rows.find(f);
        if (it == rows.end()) it = rows.emplace(f, hurwitz_row(f, s, ctx)).first;
        Complex L = combine(value_table(chi, p), it->second, p);
        L *= pow(Real(f, p), -s);
        if (squared_norm && chi.order() > 2)
            prod *= Complex(norm(L), Real(p));
        else
            prod *= L;
    }
    return prod.re;
}

}  // namespace

Complex CyclotomicNumber::value(mpfr_prec_t prec) const {
    Complex acc(prec);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0) continue;
        acc += root_of_unity(static_cast<long>(k), order, prec) * Real(coeffs[k], prec);
    }
    return acc;
}

Complex l_value(const ResidueCharacter& chi, const Real& s, const PrecisionContext& ctx) {
    require_primitive(chi);
    const mpfr_prec_t p = ctx.work_prec();
    const long f = chi.modulus();
    if (f == 1) return Complex(arith::hurwitz_zeta(s, Real(1, p), ctx), Real(p));
    std::vector<Real> row = hurwitz_row(f, s, ctx);
    Complex acc = combine(value_table(chi, p), row, p);
    acc *= pow(Real(f, p), -s);
    return acc;
}

Complex l_value(const ResidueCharacter& chi, const Complex& s, const PrecisionContext& ctx) {
    if (s.im.is_zero()) return l_value(chi, s.re, ctx);
    require_primitive(chi);
    const mpfr_prec_t p = ctx.work_prec();
    const long f = chi.modulus();
    if (f == 1) return arith::hurwitz_zeta(s, Real(1, p), ctx);
    Complex acc(p);
    for (long a = 1; a < f; ++a) {
        if (std::gcd(a, f) != 1) continue;
        acc += chi.value(a, p) * arith::hurwitz_zeta(s, Real(mpq_class(a, f), p), ctx);
    }
    return acc * pow(Real(f, p), -s);
}

CyclotomicNumber l_at_zero(const ResidueCharacter& chi) {
    require_odd_primitive(chi);
    CyclotomicNumber r;
    r.order = chi.order();
    r.coeffs.assign(r.order, mpq_class(0));
    const long f = chi.modulus();
    for (long a = 1; a < f; ++a) {
        long k = chi.value_exponent(a);
        if (k < 0) continue;
        r.coeffs[k] -= mpq_class(a, f);
    }
    for (auto& q : r.coeffs) q.canonicalize();
    return r;
}

Complex l_at_zero_value(const ResidueCharacter& chi, const PrecisionContext& ctx) {
    Complex v = l_at_zero(chi).value(ctx.work_prec());
    if (!(abs(v) > ctx.eps())) throw ConsistencyError("L(0, chi) vanishes for an odd character");
    return v;
}

Complex l_log_deriv_at_zero(const ResidueCharacter& chi, const PrecisionContext& ctx) {
    require_odd_primitive(chi);
    LogDerivKey key{chi.modulus(), chi.exponents(), ctx.bits()};
    {
        std::lock_guard<std::mutex> lock(g_cache_mu);
        auto& cache = log_deriv_cache();
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const mpfr_prec_t p = ctx.work_prec();
    const long f = chi.modulus();
    Complex L0 = l_at_zero_value(chi, ctx);
    Complex num(p);
    for (long a = 1; a < f; ++a) {
        if (std::gcd(a, f) != 1) continue;
        num += chi.value(a, p) * arith::log_gamma(mpq_class(a, f), ctx);
    }
    Complex r = num / L0;
    r.re -= log(Real(f, p));
    std::lock_guard<std::mutex> lock(g_cache_mu);
    log_deriv_cache().emplace(key, r);
    return r;
}

Complex completed_lambda(const ResidueCharacter& chi, const Complex& s, const PrecisionContext& ctx) {
    require_odd_primitive(chi);
    const mpfr_prec_t p = ctx.work_prec();
    Complex half_s = s;
    half_s.re /= 2;
    half_s.im /= 2;
    Complex w = half_s;  // (s + 1)/2
    w.re += Real(1, p) / 2;
    Complex minus_w = -w;
    Complex g = exp(arith::log_gamma(w, ctx));
    return pow(Real(chi.modulus(), p), half_s) * pow(const_pi(p), minus_w) * g * l_value(chi, s, ctx);
}

RootNumberReport root_number_check(const ResidueCharacter& chi, const PrecisionContext& ctx) {
    require_odd_primitive(chi);
    const mpfr_prec_t p = ctx.work_prec();
    const ResidueCharacter cj = chi.conj();
    const long samples[] = {20, 35, 50, 65, 80};
    std::vector<Complex> ratios;
    for (long k : samples) {
        Complex s(Real(mpq_class(k, 100), p), Real(p));
        Complex s1(Real(mpq_class(100 - k, 100), p), Real(p));
        Complex den = completed_lambda(cj, s1, ctx);
        if (!(abs(den) > ctx.eps())) throw PrecisionError("root_number_check: degenerate sample");
        ratios.push_back(completed_lambda(chi, s, ctx) / den);
    }
    RootNumberReport r{Real(p), Real(p), ratios[2]};
    for (const auto& q : ratios) {
        r.max_deviation = max(r.max_deviation, abs(abs(q) - Real(1, p)));
        r.ratio_spread = max(r.ratio_spread, abs(q - r.root_number));
    }
    return r;
}

std::vector<Real> product_taylor_model(const std::vector<ResidueCharacter>& characters, const Real& radius,
                                       const PrecisionContext& ctx) {
    std::vector<ResidueCharacter> prims = primitives(characters);
    long fmax = 1;
    for (const auto& c : prims) fmax = std::max(fmax, c.modulus());
    std::size_t K = series_degree(prims.size(), fmax, radius, ctx);
    const mpfr_prec_t p = ctx.work_prec();
    std::vector<CSeries> ls = l_series(prims, K, radius, ctx);
    CSeries prod(K + 1, Complex(p));
    prod[0] = Complex(Real(1, p), Real(p));
    for (const auto& s : ls) prod = mul_trunc(prod, s, K, p);
    std::vector<Real> out;
    real_part_checked(prod, out, ctx);
    return out;
}

ZeroScanReport stark_zero_scan(const std::vector<ResidueCharacter>& characters, const Real& disc_log,
                               const Real& c, const Real& step_fraction, const PrecisionContext& ctx,
                               const ScanOptions& opt) {
    if (characters.empty()) throw DomainError("zero scan: empty character set");
    if (!(disc_log > 0)) throw DomainError("zero scan: disc_log must be positive");
    if (!(c > 0) || c > Real(mpq_class(1, 4), c.prec() + 8))
        throw DomainError("zero scan: c must lie in (0, 1/4]");
    if (!(step_fraction > 0) || step_fraction > 1) throw DomainError("zero scan: step fraction must lie in (0, 1]");
    const mpfr_prec_t p = ctx.work_prec();
    std::vector<ResidueCharacter> prims = primitives(characters);
    for (const auto& chi : prims) {
        ResidueCharacter cj = chi.conj();
        if (std::find(prims.begin(), prims.end(), cj) == prims.end())
            throw DomainError("zero scan: character set is not closed under conjugation");
    }

    Real radius = c / disc_log;
    radius.round_to(p);
    ZeroScanReport rep;
    rep.region_left = Real(1, p) - radius;
    rep.region_right = Real(1, p);
    rep.step = radius * step_fraction;
    long M = std::lround(1.0 / step_fraction.to_double());
    if (M < 1) M = 1;
    Real neg_r = -radius;

    // Each scanned quantity: the full product, or one factor (|L|^2 if non-real).
    std::vector<std::vector<ResidueCharacter>> groups;
    std::vector<bool> squared;
    if (opt.per_character) {
        for (const auto& chi : prims) {
            groups.push_back({chi});
            squared.push_back(chi.order() > 2);
        }
    } else {
        groups.push_back(prims);
        squared.push_back(false);
    }

    bool first = true;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::vector<Real> model;
        if (squared[gi]) {
            std::vector<ResidueCharacter> both{groups[gi][0], groups[gi][0].conj()};
            model = product_taylor_model(both, radius, ctx);
        } else {
            model = product_taylor_model(groups[gi], radius, ctx);
        }
        for (long num : {1L, 2L, 10L}) {
            Real t = neg_r / num;
            Real s = Real(1, p) + t;
            Real direct = direct_product(groups[gi], s, squared[gi], ctx);
            Real mv = horner_real(model, t, p);
            Real tol = ctx.eps() * max(Real(1, p), abs(direct)) * 16;
            if (abs(mv - direct) > tol) throw PrecisionError("zero scan: Taylor model disagrees with direct evaluation");
        }
        GridResult g = scan_grid(model, neg_r, rep.step, M, ctx);
        rep.grid_points += g.points;
        rep.sign_changes += g.sign_changes;
        if (first || g.min_abs < rep.min_abs) rep.min_abs = g.min_abs;
        first = false;
        bool flagged = g.sign_changes > 0 || g.first_small >= 0;
        if (flagged && !rep.beta_estimate) {
            Real t(p);
            if (g.first_change >= 0) {
                Real lo = neg_r + rep.step * g.first_change;
                Real hi = lo + rep.step;
                t = bisect(model, lo, hi, ctx);
            } else {
                t = neg_r + rep.step * g.first_small;
            }
            rep.beta_estimate = Real(1, p) + t;
        }
        rep.delta_flag = rep.delta_flag || flagged;
    }
    return rep;
}

}  // namespace cmheight::lfun
