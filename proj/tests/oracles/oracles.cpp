#include "oracles.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace oracle {

using cmheight::dirichlet::ResidueCharacter;

std::vector<mpq_class> bernoulli_at(int n) {
    std::vector<mpq_class> A(n + 1), B(n + 1);
    for (int m = 0; m <= n; ++m) {
        A[m] = mpq_class(1, m + 1);
        A[m].canonicalize();
        for (int j = m; j >= 1; --j) {
            A[j - 1] = j * (A[j - 1] - A[j]);
        }
        B[m] = A[0];
    }
    return B;
}

namespace {

constexpr int kStirlingTerms = 40;

const std::vector<mpq_class>& bern() {
    static const std::vector<mpq_class> b = bernoulli_at(2 * kStirlingTerms + 2);
    return b;
}

Real shift_target(mpfr_prec_t prec) { return Real(static_cast<long>(prec) + 20, prec); }

// Sum of (-1)^k a(k) for k >= 0, a a totally monotone sequence, by the
// Cohen-Villegas-Zagier weights.
Complex alternating(const std::function<Complex(long)>& a, mpfr_prec_t prec) {
    long n = static_cast<long>(prec * 0.4) + 40;
    mpfr_prec_t wp = prec + 3 * n + 64;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    std::vector<mpz_class> d(n + 1);
    mpz_class acc = 0;
    for (long i = 0; i <= n; ++i) {
        mpz_class num, den, f;
        mpz_fac_ui(num.get_mpz_t(), n + i - 1);
        mpz_fac_ui(den.get_mpz_t(), n - i);
        mpz_fac_ui(f.get_mpz_t(), 2 * i);
        den *= f;
        mpz_class p4;
        mpz_ui_pow_ui(p4.get_mpz_t(), 4, i);
        num *= p4 * n;
        acc += num / den;  // exact: these are integers
        d[i] = acc;
    }
    Complex sum(wp);
    for (long k = 0; k < n; ++k) {
        Complex t = a(k);
        t *= Real(mpz_class(d[k] - d[n]), wp);
        if (k % 2) sum -= t;
        else sum += t;
    }
    sum *= Real(-1, wp) / Real(d[n], wp);
    sum.round_to(prec);
    return sum;
}

}  // namespace

Real stirling_log_gamma(const Real& x, mpfr_prec_t prec) {
    if (!(x > 0)) throw std::domain_error("stirling_log_gamma: x <= 0");
    mpfr_prec_t wp = prec + 64;
    Real y = x;
    y.round_to(wp);
    Real prod(1, wp);
    Real target = shift_target(prec);
    while (y < target) {
        prod *= y;
        y += Real(1, wp);
    }
    Real two_pi = cmheight::const_pi(wp) * 2;
    Real r = (y - Real(mpq_class(1, 2), wp)) * log(y) - y + log(two_pi) / 2;
    Real ypow = y;
    Real y2 = y * y;
    const auto& B = bern();
    for (int k = 1; k <= kStirlingTerms; ++k) {
        Real t = Real(B[2 * k], wp) / Real(static_cast<long>(2 * k * (2 * k - 1)), wp) / ypow;
        r += t;
        ypow *= y2;
    }
    r -= log(prod);
    r.round_to(prec);
    return r;
}

Real digamma(const Real& x, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 64;
    Real y = x;
    y.round_to(wp);
    Real corr(0, wp);
    Real target = shift_target(prec);
    while (y < target) {
        corr += Real(1, wp) / y;
        y += Real(1, wp);
    }
    Real r = log(y) - Real(1, wp) / (y * 2);
    Real y2 = y * y;
    Real ypow = y2;
    const auto& B = bern();
    for (int k = 1; k <= kStirlingTerms; ++k) {
        r -= Real(B[2 * k], wp) / Real(static_cast<long>(2 * k), wp) / ypow;
        ypow *= y2;
    }
    r -= corr;
    r.round_to(prec);
    return r;
}

Complex borwein_zeta(const Complex& s, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 64;
    Complex neg_s = -s;
    Complex eta = alternating([&](long k) { return pow(Real(k + 1, wp + 200), neg_s); }, wp);
    // zeta = eta / (1 - 2^(1-s))
    Complex one_minus_s(Real(1, wp) - s.re, -s.im);
    Complex den = Complex(Real(1, wp)) - pow(Real(2, wp), one_minus_s);
    Complex z = eta / den;
    z.round_to(prec);
    return z;
}

Complex dirichlet_beta(const Complex& s, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 64;
    Complex neg_s = -s;
    Complex b = alternating([&](long k) { return pow(Real(2 * k + 1, wp + 200), neg_s); }, wp);
    b.round_to(prec);
    return b;
}

long brute_conductor(const ResidueCharacter& chi) {
    long n = chi.modulus();
    for (long d = 1; d <= n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (long a : chi.group().elements()) {
            if (a % d == 1 % d && chi.value_exponent(a) != 0) {
                ok = false;
                break;
            }
        }
        if (ok) return d;
    }
    return n;
}

Real fourier_multiplicity(const cmheight::fields::CMType& phi, const ResidueCharacter& chi, mpfr_prec_t prec) {
    Complex sum(prec + 32);
    for (const auto& coset : phi.cosets()) sum += chi.value(coset.front(), prec + 32);
    Real m = norm(sum) / phi.field().degree();
    m.round_to(prec);
    return m;
}

std::vector<mpq_class> literal_a0(const cmheight::fields::CMType& phi) {
    const auto& E = phi.field();
    long n = E.modulus();
    std::vector<char> in(n, 0);
    for (const auto& coset : phi.cosets())
        for (long a : coset) in[a] = 1;
    std::vector<long> units;
    for (long a = 1; a < n; ++a)
        if (std::gcd(a, n) == 1) units.push_back(a);
    if (n == 1) units = {0};
    long G = static_cast<long>(units.size());
    long Hs = static_cast<long>(E.subgroup().size());
    std::vector<mpq_class> out(n);
    for (long sigma : units) {
        long total = 0;
        for (long nu : units) {
            // |nu Phi~ cap sigma nu Phi~| = #{x in Phi~ : nu x in nu Phi~ and nu x in sigma nu Phi~}
            for (long x = 0; x < n; ++x) {
                if (!in[x]) continue;
                long y = nu * x % n;  // element of nu Phi~
                // y in sigma nu Phi~  iff  (sigma nu)^-1 y in Phi~
                long sn = sigma * nu % n;
                long inv = 0;
                for (long u : units)
                    if (u * sn % n == 1 % n) inv = u;
                if (in[inv * y % n]) ++total;
            }
        }
        out[sigma] = mpq_class(total, G * Hs);
        out[sigma].canonicalize();
    }
    return out;
}

long class_number(long d) {
    long h = 0;
    for (long a = 1; 3 * a * a <= d; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b + d;
            if (num % (4 * a)) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            ++h;
        }
    }
    return h;
}

QuadraticTwist quadratic_twist(const cmheight::fields::AbelianField& F, const cmheight::fields::AbelianField& K) {
    using cmheight::fields::AbelianField;
    auto E = std::make_shared<const AbelianField>(cmheight::fields::compositum(F, K));
    // sigma is the identity on K iff its residue reduced mod cond(K) lies in the subgroup of K
    std::vector<bool> lifted(E->degree(), false);
    for (long c = 0; c < E->degree(); ++c) lifted[c] = K.contains(E->cosets()[c].front() % K.modulus());
    return {E, cmheight::fields::CMType(E, cmheight::fields::mask_of(*E, lifted))};
}

}  // namespace oracle
