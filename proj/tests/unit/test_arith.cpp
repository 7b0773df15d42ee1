#include <gtest/gtest.h>

#include "cmheight/arith.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cmheight;
using arith::PrecisionContext;
using testing_support::close;
using testing_support::num;

namespace {

Real q(long a, long b, mpfr_prec_t p = 256) { return Real(mpq_class(a, b), p); }

}  // namespace

TEST(PrecisionContext, DefaultsAndLimits) {
    PrecisionContext ctx(128);
    EXPECT_EQ(ctx.bits(), 128);
    EXPECT_TRUE(ctx.eps() == pow2(-112, 128));
    EXPECT_THROW(PrecisionContext(63), DomainError);
    EXPECT_THROW(PrecisionContext(128, Real(0, 64)), DomainError);
    PrecisionContext loose(128, pow2(-50, 64));
    EXPECT_TRUE(loose.eps() == pow2(-50, 64));
}

TEST(Bernoulli, MatchesIndependentRecurrence) {
    auto ref = oracle::bernoulli_at(40);
    for (int n = 0; n <= 40; ++n) {
        if (n == 1) {
            EXPECT_EQ(arith::bernoulli(1), mpq_class(-1, 2));
            continue;
        }
        EXPECT_EQ(arith::bernoulli(n), ref[n]) << n;
    }
    EXPECT_EQ(arith::bernoulli(12), mpq_class(-691, 2730));
}

TEST(LogGamma, SmallValues) {
    PrecisionContext ctx(128);
    EXPECT_TRUE(arith::log_gamma(Real(1, 128), ctx).is_zero());
    EXPECT_TRUE(close(arith::log_gamma(Real(5, 128), ctx), log(Real(24, 256)), ctx.eps()));
    Real half = arith::log_gamma(mpq_class(1, 2), ctx);
    EXPECT_TRUE(close(half, log(const_pi(256)) / 2, ctx.eps()));
    EXPECT_TRUE(close(half, num("0.572364942924700087071713675676529355823647406"), ctx.eps()));
    EXPECT_TRUE(close(half, oracle::stirling_log_gamma(q(1, 2), 256), ctx.eps()));
    EXPECT_THROW(arith::log_gamma(Real(0, 128), ctx), DomainError);
    EXPECT_THROW(arith::log_gamma(Real(-3, 128), ctx), DomainError);
    EXPECT_THROW(arith::log_gamma(mpq_class(-1, 2), ctx), DomainError);
}

TEST(LogGamma, AgreesWithStirlingOracle) {
    PrecisionContext ctx(128);
    for (auto [a, b] : {std::pair{1, 4}, {1, 3}, {3, 4}, {2, 7}, {13, 5}, {1, 97}, {96, 97}, {101, 3}}) {
        Real x = q(a, b);
        Real ref = oracle::stirling_log_gamma(x, 256);
        Real tol = ctx.eps() * max(Real(1, 64), abs(ref));
        EXPECT_TRUE(close(arith::log_gamma(x, ctx), ref, tol)) << a << "/" << b;
    }
}

TEST(LogGamma, Recurrence) {
    PrecisionContext ctx(128);
    for (const char* s : {"0.1", "0.5", "1.7", "3.3"}) {
        Real x = num(s);
        Real lhs = arith::log_gamma(x + 1, ctx) - arith::log_gamma(x, ctx) - log(x);
        EXPECT_TRUE(close(lhs, Real(0, 256), ctx.eps())) << s;
    }
}

TEST(LogGamma, Reflection) {
    PrecisionContext ctx(128);
    Real pi = const_pi(256);
    for (const char* s : {"0.05", "0.25", "0.5", "0.61", "0.9"}) {
        Real x = num(s);
        Real lhs = arith::log_gamma(x, ctx) + arith::log_gamma(Real(1, 256) - x, ctx);
        Real rhs = log(pi / sin(pi * x));
        EXPECT_TRUE(close(lhs, rhs, ctx.eps())) << s;
    }
}

TEST(LogGamma, ComplexMatchesRealAxisAndRecurrence) {
    PrecisionContext ctx(128);
    Complex z(num("0.3"), num("2.5"));
    Complex lz = arith::log_gamma(z, ctx);
    Complex z1 = z;
    z1.re += Real(1, 256);
    Complex diff = arith::log_gamma(z1, ctx) - lz - log(z);
    EXPECT_TRUE(close(diff, Complex(Real(0, 256)), ctx.eps()));
    // conj symmetry
    EXPECT_TRUE(close(arith::log_gamma(conj(z), ctx), conj(lz), ctx.eps()));
    // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
    Real t = num("1.25");
    Real pi = const_pi(256);
    Complex w(q(1, 2), t);
    Real lhs = arith::log_gamma(w, ctx).re * 2;
    Real cosh = (exp(pi * t) + exp(-(pi * t))) / 2;
    EXPECT_TRUE(close(lhs, log(pi / cosh), ctx.eps()));
}

TEST(Digamma, Half) {
    PrecisionContext ctx(128);
    Real d = arith::digamma_half(ctx);
    EXPECT_TRUE(close(d, oracle::digamma(q(1, 2), 320), ctx.eps()));
    EXPECT_TRUE(close(d, num("-1.9635100260214234794409763329987555671931596"), ctx.eps()));
    Real lo = arith::digamma_half(PrecisionContext(64));
    Real hi = arith::digamma_half(PrecisionContext(256));
    EXPECT_TRUE(close(lo, hi, pow2(16 - 64, 64)));
}

TEST(Digamma, CentralDifferenceOfLogGamma) {
    PrecisionContext ctx(128);
    Real h = pow2(-40, 256);
    Real x = q(1, 2);
    Real dd = (arith::log_gamma(x + h, ctx) - arith::log_gamma(x - h, ctx)) / (h * 2);
    Real tol = sqrt(ctx.eps()) * 10;
    EXPECT_TRUE(close(dd, arith::digamma_half(ctx), tol));
}

TEST(Hurwitz, ClassicalValues) {
    PrecisionContext ctx(128);
    Real pi2 = const_pi(256) * const_pi(256);
    Real z21 = arith::hurwitz_zeta(Real(2, 256), Real(1, 256), ctx);
    EXPECT_TRUE(close(z21, pi2 / 6, ctx.eps()));
    EXPECT_TRUE(close(z21, oracle::borwein_zeta(Complex(Real(2, 256)), 256).re, ctx.eps()));
    EXPECT_TRUE(close(arith::hurwitz_zeta(Real(2, 256), q(1, 2), ctx), pi2 / 2, ctx.eps() * 5));
    for (auto [a, b] : {std::pair{1, 4}, {1, 3}, {1, 2}}) {
        Real v = arith::hurwitz_zeta(Real(0, 256), q(a, b), ctx);
        EXPECT_TRUE(close(v, q(1, 2) - q(a, b), ctx.eps())) << a << "/" << b;
    }
}

TEST(Hurwitz, Errors) {
    PrecisionContext ctx(128);
    EXPECT_THROW(arith::hurwitz_zeta(Real(1, 128), q(1, 2), ctx), PoleError);
    EXPECT_THROW(arith::hurwitz_zeta(Real(2, 128), Real(0, 128), ctx), DomainError);
    EXPECT_THROW(arith::hurwitz_zeta(Real(2, 128), q(3, 2), ctx), DomainError);
    arith::HurwitzOptions tight;
    tight.shift = 2;
    tight.bernoulli_terms = 2;
    tight.max_doublings = 0;
    EXPECT_THROW(arith::hurwitz_zeta(Complex(num("0.5"), num("40")), q(1, 3), ctx, tight), PrecisionError);
}

TEST(Hurwitz, RiemannZetaOracle) {
    PrecisionContext ctx(128);
    std::vector<Complex> pts = {Complex(Real(2, 256)), Complex(Real(3, 256)), Complex(num("0.5"), num("14.134725"))};
    for (const auto& s : pts) {
        Complex v = arith::hurwitz_zeta(s, Real(1, 256), ctx);
        Complex ref = oracle::borwein_zeta(s, 256);
        Real tol = ctx.eps() * max(Real(1, 64), abs(ref));
        EXPECT_TRUE(close(v, ref, tol)) << s.im.to_string(8);
    }
}

TEST(Hurwitz, SumOverResidues) {
    // sum_{a=1}^{q} zeta(s, a/q) = q^s zeta(s)
    PrecisionContext ctx(128);
    Complex s(num("0.75"), num("3.5"));
    long qq = 6;
    Complex sum(256);
    for (long a = 1; a <= qq; ++a) sum += arith::hurwitz_zeta(s, q(a, qq), ctx);
    Complex ref = pow(Real(qq, 256), s) * oracle::borwein_zeta(s, 256);
    EXPECT_TRUE(close(sum, ref, ctx.eps() * 16));
}

TEST(Hurwitz, PrecisionRefinement) {
    for (const auto& [s, x] : {std::pair{"2.5", "0.3"}, {"-1.5", "0.7"}, {"0.5", "1"}}) {
        Real lo = arith::hurwitz_zeta(num(s), num(x), PrecisionContext(96));
        Real hi = arith::hurwitz_zeta(num(s), num(x), PrecisionContext(192));
        EXPECT_TRUE(close(lo, hi, pow2(16 - 96, 64) * max(Real(1, 64), abs(hi)))) << s << " " << x;
    }
    Complex s(num("0.5"), num("6"));
    Complex lo = arith::hurwitz_zeta(s, num("0.4"), PrecisionContext(96));
    Complex hi = arith::hurwitz_zeta(s, num("0.4"), PrecisionContext(192));
    EXPECT_TRUE(close(lo, hi, pow2(16 - 96, 64)));
}
