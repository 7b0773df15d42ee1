#include <gtest/gtest.h>

#include "cmheight/bounds.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cmheight;
using namespace cmheight::bounds;
using fields::make_field;
using testing_support::close;
using testing_support::num;

namespace {

std::shared_ptr<const AbelianField> shared(AbelianField K) { return std::make_shared<const AbelianField>(std::move(K)); }

Real quarter() { return Real(mpq_class(1, 4), 192); }

ZeroScanReport scan(const AbelianField& K, const Real& c = quarter()) {
    return scan_field(K, c, num("1e-3"), PrecisionContext(128));
}

// psi(1/2) - log pi
Real tail_const() { return oracle::digamma(Real(mpq_class(1, 2), 256), 256) - log(const_pi(256)); }

}  // namespace

TEST(Compare, VerdictsAndOrientation) {
    PrecisionContext ctx(128);
    auto r = compare("x", Real(1, 128), Real(2, 128), Orientation::Less, true, ctx);
    EXPECT_EQ(r.holds, Verdict::Holds);
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.margin == Real(1, 64));
    auto s = compare("x", Real(1, 128), Real(2, 128), Orientation::Greater, true, ctx);
    EXPECT_EQ(s.holds, Verdict::Fails);
    EXPECT_TRUE(s.margin == -r.margin);
    Real one(1, 192);
    auto t = compare("x", one, one + pow2(-120, 192), Orientation::Less, true, ctx);
    EXPECT_EQ(t.holds, Verdict::Inconclusive);
    EXPECT_FALSE(t.passed());
    auto rr = reversed(r, ctx);
    EXPECT_EQ(rr.orientation, Orientation::Greater);
    EXPECT_TRUE(rr.lhs == r.rhs);
    EXPECT_TRUE(rr.margin == r.margin);
    EXPECT_EQ(rr.holds, r.holds);
    EXPECT_EQ(reversed(rr, ctx).orientation, Orientation::Less);
}

TEST(Compare, ExactLogs) {
    PrecisionContext ctx(128);
    auto eq = compare_exact("e", LogProduct::of(400), LogProduct::of(20) * mpq_class(2), Orientation::Less, false, ctx);
    EXPECT_EQ(eq.holds, Verdict::Holds);
    EXPECT_TRUE(eq.exact);
    EXPECT_TRUE(eq.margin.is_zero());
    auto strict = compare_exact("e", LogProduct::of(400), LogProduct::of(20) * mpq_class(2), Orientation::Less, true, ctx);
    EXPECT_EQ(strict.holds, Verdict::Fails);
    // 2^485 exceeds 3^306 by a factor of about 1.001
    LogProduct a = LogProduct::of(2) * mpq_class(485);
    LogProduct b = LogProduct::of(3) * mpq_class(306);
    auto less = compare_exact("c", a, b, Orientation::Less, true, ctx);
    EXPECT_EQ(less.holds, Verdict::Fails);
    EXPECT_EQ(reversed(less, ctx).holds, Verdict::Fails);
    auto greater = compare_exact("c", a, b, Orientation::Greater, true, ctx);
    EXPECT_EQ(greater.holds, Verdict::Holds);
    EXPECT_TRUE(close(greater.margin, num("0.001022239131909500412536408922769894482967"), pow2(-100, 64)));
}

TEST(Compare, AntisymmetryOnReports) {
    PrecisionContext ctx(128);
    auto E = shared(make_field(7, {}));
    std::vector<InequalityReport> reps = check_disc_compositum(*E, fields::max_real_subfield(*E), ctx);
    auto more = check_disc_cyclotomic_compositum(*E, ctx);
    reps.insert(reps.end(), more.begin(), more.end());
    reps.push_back(check_mu_roots_of_unity(*E, ctx));
    reps.push_back(check_cyclotomic_disc_bound(*E, ctx));
    fields::CMType phi(E, 1);
    auto R = fields::reflex_field(phi);
    auto sc = scan(R);
    reps.push_back(check_eq13(phi, quarter(), sc, ctx));
    auto [lo, hi] = check_eq6(phi, R.odd_characters()[0], sc, ctx);
    reps.push_back(lo);
    reps.push_back(hi);
    reps.push_back(bost_report(phi, ctx));
    for (const auto& r : reps) {
        auto rr = reversed(r, ctx);
        EXPECT_EQ(rr.holds, r.holds) << r.name;
        EXPECT_TRUE(rr.margin == r.margin) << r.name;
        EXPECT_TRUE(rr.lhs == r.rhs && rr.rhs == r.lhs) << r.name;
        // flipping only the orientation flag negates the margin
        Orientation flipped = r.orientation == Orientation::Less ? Orientation::Greater : Orientation::Less;
        auto f = compare(r.name, r.lhs, r.rhs, flipped, r.strict, ctx);
        EXPECT_TRUE(close(f.margin, -r.margin, ctx.eps() * max(Real(1, 64), abs(r.lhs)) * 4)) << r.name;
        EXPECT_TRUE(r.passed()) << r.name;
    }
}

TEST(Misc, CPrimeAndNames) {
    EXPECT_TRUE(c_prime(Real(mpq_class(1, 4), 128)).is_zero());
    EXPECT_TRUE(c_prime(Real(mpq_class(1, 8), 128)) == Real(8, 64));
    EXPECT_EQ(verdict_name(Verdict::Holds), "true");
    EXPECT_EQ(verdict_name(Verdict::Fails), "false");
    EXPECT_EQ(verdict_name(Verdict::Inconclusive), "inconclusive");
    EXPECT_EQ(verdict_name(Verdict::HypothesisFailed), "hypothesis-failed");
}

TEST(Misc, DescriptorRoundTrip) {
    for (const auto& E : cli::enumerate_fields(40)) EXPECT_EQ(from_descriptor(describe(E)), E);
    EXPECT_EQ(from_descriptor({1, {}}), fields::rationals());
    auto d = describe(make_field(5, {4}, false));
    EXPECT_EQ(d.modulus, 5);
    EXPECT_EQ(d.subgroup_generators, (std::vector<long>{4}));
}

TEST(LogDerivBounds, GaussianField) {
    PrecisionContext ctx(128);
    auto Qi = shared(make_field(4, {}));
    auto chi = Qi->character_group()[1];
    auto [lo, hi] = check_eq6(*Qi, chi, scan(*Qi), ctx);
    Real lhs = num("-0.783188785413673552943890693798222056180420232") * 2;
    EXPECT_TRUE(close(lo.lhs, lhs, ctx.eps()));
    Real tail = log(Real(4, 256)) + tail_const();
    Real D = log(Real(4, 256)) * 75;
    EXPECT_TRUE(close(lo.rhs, tail - D, ctx.eps() * 128));
    EXPECT_TRUE(close(hi.rhs, tail + D, ctx.eps() * 128));
    EXPECT_TRUE(close(lo.rhs, num("-105.694022634742729447334757660161946354"), pow2(-100, 64) * 128));
    EXPECT_TRUE(close(hi.rhs, num("102.2501315332408633778348787772910240686"), pow2(-100, 64) * 128));
    EXPECT_EQ(lo.holds, Verdict::Holds);
    EXPECT_EQ(hi.holds, Verdict::Holds);
    EXPECT_TRUE(lo.strict && hi.strict);
    // through the CM type
    auto [lo2, hi2] = check_eq6(fields::CMType(Qi, 0), chi, scan(*Qi), ctx);
    EXPECT_TRUE(lo2.lhs == lo.lhs);
}

TEST(LogDerivBounds, FifthRoots) {
    PrecisionContext ctx(128);
    auto Q5 = shared(make_field(5, {}));
    auto chars = Q5->character_group();
    auto sc = scan(*Q5);
    EXPECT_FALSE(sc.delta_flag);
    auto [lo, hi] = check_eq6(*Q5, chars[1], sc, ctx);
    EXPECT_EQ(lo.holds, Verdict::Holds);
    EXPECT_EQ(hi.holds, Verdict::Holds);
    EXPECT_TRUE(lo.margin > 100);
    EXPECT_TRUE(hi.margin > 100);
    // chi and its conjugate give the same pair
    auto [lo3, hi3] = check_eq6(*Q5, chars[3], sc, ctx);
    EXPECT_TRUE(close(lo3.lhs, lo.lhs, ctx.eps()));
}

TEST(LogDerivBounds, InjectedZeroShiftsLeftSide) {
    PrecisionContext ctx(128);
    auto Q5 = shared(make_field(5, {}));
    auto chars = Q5->character_group();
    auto clean = scan(*Q5);
    auto fake = clean;
    fake.delta_flag = true;
    fake.beta_estimate = Real(1, 192) - num("1e-3", 192);
    auto [lo0, hi0] = check_eq6(*Q5, chars[1], clean, ctx);
    auto [lo1, hi1] = check_eq6(*Q5, chars[1], fake, ctx);
    EXPECT_TRUE(close(lo1.lhs - lo0.lhs, Real(-2000, 64), pow2(-90, 64)));
    // the upper side still holds; the lower bound is about -363.6, so a shift of 2000 breaks it
    EXPECT_EQ(hi1.holds, Verdict::Holds);
    EXPECT_EQ(lo1.holds, Verdict::Fails);
    EXPECT_TRUE(close(lo1.rhs, num("-363.6223322971093075641544943270178455326"), pow2(-100, 64) * 512));
    // flagged without a located zero: the hypothesis is not met
    fake.beta_estimate.reset();
    auto [lo2, hi2] = check_eq6(*Q5, chars[1], fake, ctx);
    EXPECT_EQ(lo2.holds, Verdict::HypothesisFailed);
    EXPECT_EQ(hi2.holds, Verdict::HypothesisFailed);
}

TEST(LogDerivBounds, Errors) {
    PrecisionContext ctx(128);
    auto Q5 = shared(make_field(5, {}));
    auto Qi = shared(make_field(4, {}));
    auto chars = Q5->character_group();
    EXPECT_THROW(check_eq6(*Q5, chars[1], scan(*Qi), ctx), DomainError);        // wrong region
    EXPECT_THROW(check_eq6(*Q5, chars[2], scan(*Q5), ctx), DomainError);        // even
    EXPECT_THROW(check_eq6(*Q5, Qi->character_group()[1], scan(*Q5), ctx), DomainError);  // not a reflex character
    EXPECT_THROW(check_eq6(*Q5, chars[1], scan(*Q5, Real(mpq_class(1, 8), 128)), ctx), DomainError);
}

TEST(HeightBound, Examples) {
    PrecisionContext ctx(128);
    auto Qi = shared(make_field(4, {}));
    auto r = check_eq13(fields::CMType(Qi, 0), quarter(), scan(*Qi), ctx);
    EXPECT_EQ(r.holds, Verdict::Holds);
    Real want = (log(Real(4, 256)) * 150 + tail_const()) / 4;
    EXPECT_TRUE(close(r.rhs, want, ctx.eps() * 64));
    EXPECT_TRUE(close(r.rhs, num("51.20897856402819229289630818827528903595"), pow2(-100, 64) * 64));
    EXPECT_TRUE(close(r.lhs, num("-0.738167982986809431180561407628199312127960183"), ctx.eps()));

    auto Q5 = shared(make_field(5, {}));
    auto r5 = check_eq13(fields::CMType(Q5, 0), quarter(), scan(*Q5), ctx);
    EXPECT_EQ(r5.holds, Verdict::Holds);
    EXPECT_TRUE(r5.margin > 1000);
    Real want5 = (log(Real(125, 256)) * (75 * 24) + tail_const()) * 2 / 4;
    EXPECT_TRUE(close(r5.rhs, want5, ctx.eps() * 4096));
}

TEST(HeightBound, MonotoneInC) {
    PrecisionContext ctx(128);
    Real eighth(mpq_class(1, 8), 192);
    for (const auto& E : cli::enumerate_fields(13)) {
        Real L = fields::discriminant_log_value(E, 192);
        Real a = eq13_rhs(E.g(), L, quarter(), 192);
        Real b = eq13_rhs(E.g(), L, eighth, 192);
        EXPECT_TRUE(b > a);
        // c' = 8 turns 75 into 91
        EXPECT_TRUE(close((b - a) / (a - (tail_const() * E.g() / 4)), Real(mpq_class(16, 75), 192), pow2(-100, 64)));
    }
    auto Q5 = shared(make_field(5, {}));
    auto r8 = check_eq13(fields::CMType(Q5, 0), eighth, scan(*Q5, eighth), ctx);
    auto r4 = check_eq13(fields::CMType(Q5, 0), quarter(), scan(*Q5), ctx);
    EXPECT_TRUE(r8.rhs > r4.rhs);
    EXPECT_EQ(r8.holds, Verdict::Holds);
}

TEST(HeightBound, FlaggedScanIsHypothesisFailure) {
    PrecisionContext ctx(128);
    auto Q5 = shared(make_field(5, {}));
    auto sc = scan(*Q5);
    sc.delta_flag = true;
    auto r = check_eq13(fields::CMType(Q5, 0), quarter(), sc, ctx);
    EXPECT_EQ(r.holds, Verdict::HypothesisFailed);
    EXPECT_FALSE(r.passed());
    EXPECT_THROW(check_eq13(fields::CMType(Q5, 0), quarter(), scan(make_field(4, {})), ctx), DomainError);
}

TEST(DiscCompositum, Examples) {
    PrecisionContext ctx(128);
    auto R5 = make_field(5, {4}, false);
    auto Qi = make_field(4, {});
    auto reps = check_disc_compositum(R5, Qi, ctx);
    ASSERT_EQ(reps.size(), 4u);
    EXPECT_EQ(reps[1].name, "compositum_disc");
    EXPECT_TRUE(close(reps[1].lhs, log(Real(400, 256)), ctx.eps()));
    EXPECT_TRUE(reps[1].margin.is_zero());
    EXPECT_TRUE(reps[1].exact);
    EXPECT_FALSE(reps[1].strict);
    EXPECT_EQ(reps[1].holds, Verdict::Holds);
    for (const auto& r : reps) EXPECT_EQ(r.holds, Verdict::Holds) << r.name;

    auto same = check_disc_compositum(Qi, Qi, ctx);
    EXPECT_TRUE(close(same[0].lhs, log(Real(2, 256)), ctx.eps()));
    EXPECT_TRUE(close(same[0].rhs, log(Real(4, 256)), ctx.eps()));
    EXPECT_EQ(same[0].holds, Verdict::Holds);

    for (const auto& r : check_disc_compositum(make_field(5, {}), make_field(3, {}), ctx)) {
        EXPECT_EQ(r.holds, Verdict::Holds) << r.name;
        EXPECT_TRUE(r.exact);
    }
}

TEST(DiscCompositum, CyclotomicPartner) {
    PrecisionContext ctx(128);
    for (const auto& E : cli::enumerate_fields(30)) {
        for (const auto& r : check_disc_cyclotomic_compositum(E, ctx)) EXPECT_EQ(r.holds, Verdict::Holds) << E.to_string();
    }
    // the closed cyclotomic log discriminant against the generic one
    for (long M = 3; M <= 150; ++M) EXPECT_EQ(cyclotomic_disc_log(M), fields::discriminant_log(fields::cyclotomic(M))) << M;
}

TEST(Nearby, FifthRoots) {
    PrecisionContext ctx(128);
    auto Q5 = shared(make_field(5, {}));
    auto r = check_nearby_reflex(fields::CMType(Q5, 0), fields::CMType(Q5, 1), ctx);
    EXPECT_EQ(r.holds, Verdict::Holds);
    EXPECT_TRUE(close(r.lhs, log(Real(125, 256)) / 2, ctx.eps()));
    EXPECT_TRUE(close(r.rhs, log(Real(125, 256)) / 4, ctx.eps()));
    EXPECT_THROW(check_nearby_reflex(fields::CMType(Q5, 0), fields::CMType(Q5, 3), ctx), DomainError);
    EXPECT_THROW(check_nearby_reflex(fields::CMType(Q5, 0), fields::CMType(Q5, 0), ctx), DomainError);
}

TEST(Nearby, DegreeTwo) {
    PrecisionContext ctx(128);
    auto Qi = shared(make_field(4, {}));
    auto r = check_nearby_reflex(fields::CMType(Qi, 0), fields::CMType(Qi, 1), ctx);
    EXPECT_EQ(r.holds, Verdict::Holds);
    EXPECT_TRUE(close(r.lhs, log(Real(4, 256)), ctx.eps()));
    EXPECT_TRUE(close(r.rhs, log(Real(4, 256)) / 2, ctx.eps()));
}

TEST(Nearby, QuadraticTwist) {
    PrecisionContext ctx(128);
    auto tw = oracle::quadratic_twist(make_field(7, {6}, false), make_field(3, {}));
    const auto& E = tw.E;
    ASSERT_EQ(E->g(), 3);
    for (long k = 0; k < E->g(); ++k) {
        fields::CMType other(E, tw.phi.mask() ^ (1ULL << k));
        auto r = check_nearby_reflex(tw.phi, other, ctx);
        EXPECT_EQ(r.holds, Verdict::Holds);
        // the small reflex Q(sqrt -3) is paired with a field of degree 2g
        EXPECT_EQ(fields::reflex_field(tw.phi).degree(), 2);
        auto R2 = fields::reflex_field(other);
        EXPECT_GT(R2.degree(), 2);
        Real small = log(Real(3, 256)) / 2;
        EXPECT_TRUE(small < r.rhs);  // one side alone falls short
        EXPECT_TRUE(r.lhs > r.rhs);
    }
}

TEST(Nearby, AllPairsMatchDirectChecks) {
    PrecisionContext ctx(128);
    for (const auto& K : cli::enumerate_fields(40)) {
        if (K.g() > 6) continue;
        auto E = shared(K);
        auto summary = check_nearby_reflex_all(*E, ctx);
        std::uint64_t pairs = 0;
        for (const auto& s : summary) {
            pairs += s.pairs;
            EXPECT_EQ(s.report.holds, Verdict::Holds);
            auto direct = check_nearby_reflex(fields::CMType(E, s.example1), fields::CMType(E, s.example2), ctx);
            EXPECT_TRUE(direct.lhs == s.report.lhs) << E->to_string();
            EXPECT_EQ(fields::stabilizer(fields::CMType(E, s.example1)), s.stab1);
            EXPECT_EQ(fields::stabilizer(fields::CMType(E, s.example2)), s.stab2);
        }
        EXPECT_EQ(pairs, static_cast<std::uint64_t>(E->g()) * fields::cm_type_count(*E)) << E->to_string();
    }
}

TEST(RootsOfUnityBound, Examples) {
    PrecisionContext ctx(128);
    auto a = check_mu_roots_of_unity(make_field(4, {}), ctx);
    EXPECT_TRUE(a.lhs == Real(4, 64) && a.rhs == Real(16, 64));
    auto b = check_mu_roots_of_unity(make_field(5, {}), ctx);
    EXPECT_TRUE(b.lhs == Real(10, 64) && b.rhs == Real(64, 64));
    auto c = check_mu_roots_of_unity(fields::cyclotomic(24), ctx);
    EXPECT_TRUE(c.lhs == Real(24, 64) && c.rhs == Real(256, 64));
    for (const auto& r : {a, b, c}) EXPECT_EQ(r.holds, Verdict::Holds);
}

TEST(CyclotomicDiscBound, Examples) {
    PrecisionContext ctx(128);
    auto r = check_cyclotomic_disc_bound(make_field(4, {}), ctx);
    EXPECT_EQ(r.holds, Verdict::Holds);
    EXPECT_TRUE(close(r.lhs, log(Real(256, 256)), ctx.eps()));
    Real want = log(Real(256, 256)) * (256 * 2) + log(Real(4, 256)) * 256;
    EXPECT_TRUE(close(r.rhs, want, ctx.eps() * 1024));
    EXPECT_EQ(cyclotomic_discriminant_formula(8), 256);

    auto r3 = check_cyclotomic_disc_bound(make_field(3, {}), ctx);
    EXPECT_EQ(r3.holds, Verdict::Holds);
    EXPECT_TRUE(close(r3.lhs, fields::discriminant_log_value(fields::cyclotomic(36), 256), ctx.eps()));
    // a field whose conductor does not divide m rad(m)
    auto K7 = make_field(7, {2});
    auto r7 = check_cyclotomic_disc_bound(K7, ctx);
    EXPECT_EQ(r7.holds, Verdict::Holds);
    EXPECT_TRUE(close(r7.lhs, fields::discriminant_log_value(fields::compositum(K7, fields::cyclotomic(4)), 256), ctx.eps()));
}

TEST(CyclotomicDiscBound, BoundIncreasesWithDegree) {
    // (2n)^4 n log (2n)^4 + (2n)^4 log|disc| for a fixed discriminant
    Real L = log(Real(125, 256));
    auto bound = [&](long n) {
        Real q = pow_si(Real(2 * n, 256), 4);
        return q * n * log(q) + q * L;
    };
    for (long n = 1; n < 40; ++n) EXPECT_TRUE(bound(n + 1) > bound(n));
}

TEST(CyclotomicDiscBound, CyclotomicFormula) {
    for (long k = 3; k <= 100; ++k) EXPECT_EQ(cyclotomic_discriminant_formula(k), fields::discriminant_exact(fields::cyclotomic(k))) << k;
    EXPECT_EQ(radical(72), 6);
    EXPECT_EQ(radical(1), 1);
    EXPECT_THROW(cyclotomic_discriminant_formula(2), DomainError);
}

TEST(Bost, QuadraticFields) {
    PrecisionContext ctx(128);
    auto Qi = shared(make_field(4, {}));
    auto a = bost_report(fields::CMType(Qi, 0), ctx);
    EXPECT_EQ(a.holds, Verdict::Holds);
    EXPECT_TRUE(close(a.lhs, num("-0.738167982986809431180561407628199312127960183"), ctx.eps()));
    auto Q3 = shared(make_field(3, {}));
    auto b = bost_report(fields::CMType(Q3, 0), ctx);
    EXPECT_EQ(b.holds, Verdict::Holds);
    EXPECT_TRUE(b.rhs == Real::parse(kBostFloor, 160));
    EXPECT_FALSE(b.strict);
    Real lo = colmez::faltings_height(fields::CMType(Q3, 0), PrecisionContext(128));
    Real hi = colmez::faltings_height(fields::CMType(Q3, 0), PrecisionContext(256));
    EXPECT_TRUE(close(lo, hi, pow2(-100, 64)));
}

TEST(RootDiscriminant, Ratio) {
    auto Qi = make_field(4, {});
    Real h = num("-0.738167982986809431180561407628199312127960183");
    Real r = root_discriminant_ratio(h, Qi, 192);
    EXPECT_TRUE(close(r, h / (log(Real(4, 256)) / 2), pow2(-150, 64)));
}
