#include "cmheight/bounds.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <numeric>

namespace cmheight::bounds {

namespace {

Real tolerance(const Real& lhs, const Real& rhs, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    Real scale = max(Real(1, p), max(abs(lhs), abs(rhs)));
    return ctx.eps() * scale * 64;
}

Verdict decide(const Real& margin, const Real& tol) {
    if (abs(margin) < tol) return Verdict::Inconclusive;
    return margin > 0 ? Verdict::Holds : Verdict::Fails;
}

Real psi_half_minus_log_pi(const PrecisionContext& ctx) {
    return arith::digamma_half(ctx) - log(const_pi(ctx.work_prec()));
}

// Lift chi to the modulus of K and check it is a character of K.
ResidueCharacter as_character_of(const AbelianField& K, const ResidueCharacter& chi) {
    ResidueCharacter prim = dirichlet::primitive_of(chi);
    if (K.modulus() % prim.modulus() != 0) throw DomainError("character is not a character of the reflex field");
    ResidueCharacter lifted = dirichlet::lift_to(prim, K.modulus());
    const auto& X = K.character_group();
    if (std::find(X.begin(), X.end(), lifted) == X.end())
        throw DomainError("character is not a character of the reflex field");
    return lifted;
}

void require_region(const ZeroScanReport& scan, const AbelianField& K, const Real& c, const PrecisionContext& ctx) {
    Real want = stark_left(K, c, ctx.work_prec());
    if (abs(scan.region_left - want) > ctx.eps() * 64 || !(scan.region_right == Real(1, ctx.work_prec())))
        throw DomainError("zero scan does not cover the Stark region of the reflex field");
}

LogProduct scaled(const LogProduct& x, const mpq_class& q) { return x * q; }

mpq_class frac(long a, long b) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

}  // namespace

LogProduct cyclotomic_disc_log(long M) {
    LogProduct out;
    long phiM = dirichlet::euler_phi(M);
    for (auto [p, e] : dirichlet::factorize(M)) {
        long q = 1;
        for (int k = 0; k < e; ++k) q *= p;
        long phiq = dirichlet::euler_phi(q);
        // phi(p^k) - phi(p^(k-1)) primitive characters mod p^k
        long weight = 0;
        long pk = 1;
        for (int k = 1; k <= e; ++k) {
            long prev = pk;
            pk *= p;
            long prim = dirichlet::euler_phi(pk) - dirichlet::euler_phi(prev);
            weight += prim * k;
        }
        out += LogProduct::of(p) * mpq_class(weight * (phiM / phiq));
    }
    return out;
}

FieldDescriptor describe(const AbelianField& E) { return {E.modulus(), E.subgroup_generators()}; }

AbelianField from_descriptor(const FieldDescriptor& d) {
    if (d.modulus == 1) return fields::rationals();
    return fields::make_field(d.modulus, d.subgroup_generators, false);
}

InequalityReport compare(std::string name, const Real& lhs, const Real& rhs, Orientation o, bool strict,
                         const PrecisionContext& ctx, Inputs inputs) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.orientation = o;
    r.strict = strict;
    r.margin = o == Orientation::Less ? rhs - lhs : lhs - rhs;
    r.holds = decide(r.margin, tolerance(lhs, rhs, ctx));
    r.inputs = std::move(inputs);
    return r;
}

InequalityReport compare_exact(std::string name, const LogProduct& lhs, const LogProduct& rhs, Orientation o,
                               bool strict, const PrecisionContext& ctx, Inputs inputs) {
    const mpfr_prec_t p = ctx.work_prec();
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs.value(p);
    r.rhs = rhs.value(p);
    r.orientation = o;
    r.strict = strict;
    r.exact = true;
    r.inputs = std::move(inputs);
    LogProduct d = o == Orientation::Less ? rhs - lhs : lhs - rhs;
    if (d.is_zero()) {
        r.margin = Real(p);
        r.holds = strict ? Verdict::Fails : Verdict::Holds;
        return r;
    }
    // A nonzero combination of logs of distinct primes is nonzero; raise the
    // precision until its sign is resolved.
    for (mpfr_prec_t q = p;; q *= 2) {
        Real v = d.value(q);
        Real tol = pow2(-static_cast<long>(q) / 2, q) * max(Real(1, q), max(abs(r.lhs), abs(r.rhs)));
        if (abs(v) > tol || q > 64 * p) {
            r.margin = v;
            r.margin.round_to(p);
            r.holds = v > 0 ? Verdict::Holds : Verdict::Fails;
            return r;
        }
    }
}

InequalityReport hypothesis_failed(std::string name, const PrecisionContext& ctx, Inputs inputs) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = Real(ctx.work_prec());
    r.rhs = Real(ctx.work_prec());
    r.margin = Real(ctx.work_prec());
    r.holds = Verdict::HypothesisFailed;
    r.inputs = std::move(inputs);
    return r;
}

InequalityReport reversed(const InequalityReport& r, const PrecisionContext& ctx) {
    if (r.holds == Verdict::HypothesisFailed) return r;
    Orientation o = r.orientation == Orientation::Less ? Orientation::Greater : Orientation::Less;
    InequalityReport out = compare(r.name, r.rhs, r.lhs, o, r.strict, ctx, r.inputs);
    if (r.exact) {
        out.exact = true;
        out.margin = r.margin;
        out.holds = r.holds;
    }
    return out;
}

Real c_prime(const Real& c) {
    const mpfr_prec_t p = c.prec();
    Real quarter(mpq_class(1, 4), p);
    if (c < quarter) return Real(1, p) / c;
    return Real(p);
}

Real stark_left(const AbelianField& K, const Real& c, mpfr_prec_t prec) {
    Real r = c / fields::discriminant_log_value(K, prec);
    r.round_to(prec);
    return Real(1, prec) - r;
}

ZeroScanReport scan_field(const AbelianField& K, const Real& c, const Real& step_fraction,
                          const PrecisionContext& ctx) {
    return lfun::stark_zero_scan(K.odd_characters(), fields::discriminant_log_value(K, ctx.work_prec()), c,
                                 step_fraction, ctx);
}

std::pair<InequalityReport, InequalityReport> check_eq6(const AbelianField& reflex, const ResidueCharacter& chi,
                                                        const ZeroScanReport& scan, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    ResidueCharacter lifted = as_character_of(reflex, chi);
    if (lifted.is_trivial() || !dirichlet::is_odd(lifted)) throw DomainError("check_eq6: character must be odd and nontrivial");
    require_region(scan, reflex, Real(mpq_class(1, 4), p), ctx);
    ResidueCharacter prim = dirichlet::primitive_of(lifted);
    Inputs inputs{{"reflex", describe(reflex)}, {"chi", prim.to_string()}};
    if (scan.delta_flag && !scan.beta_estimate) {
        return {hypothesis_failed("logderiv_lower", ctx, inputs), hypothesis_failed("logderiv_upper", ctx, inputs)};
    }
    Complex a = lfun::l_log_deriv_at_zero(prim, ctx);
    Complex b = lfun::l_log_deriv_at_zero(prim.conj(), ctx);
    Real lhs = -(a.re + b.re);
    if (scan.delta_flag) lhs -= Real(2, p) / (Real(1, p) - *scan.beta_estimate);
    Real D = fields::discriminant_log_value(reflex, p) * 75;
    Real tail = log(Real(prim.modulus(), p)) + psi_half_minus_log_pi(ctx);
    auto lower = compare("logderiv_lower", lhs, tail - D, Orientation::Greater, true, ctx, inputs);
    auto upper = compare("logderiv_upper", lhs, tail + D, Orientation::Less, true, ctx, inputs);
    return {std::move(lower), std::move(upper)};
}

std::pair<InequalityReport, InequalityReport> check_eq6(const CMType& phi, const ResidueCharacter& chi,
                                                        const ZeroScanReport& scan, const PrecisionContext& ctx) {
    AbelianField reflex = fields::reflex_field(phi);
    return check_eq6(reflex, chi, scan, ctx);
}

Real eq13_rhs(long g, const Real& reflex_disc_log, const Real& c, mpfr_prec_t prec) {
    mpz_class fact = 1;
    for (long k = 2; k <= 2 * g; ++k) fact *= k;
    PrecisionContext local(static_cast<int>(std::max<mpfr_prec_t>(prec - 32, 64)));
    Real factor = Real(75, prec) + c_prime(c) * 2;
    Real r = factor * Real(fact, prec) * reflex_disc_log;
    r += arith::digamma_half(local) - log(const_pi(prec));
    mpfr_mul_si(r.get(), r.get(), g, MPFR_RNDN);
    mpfr_div_si(r.get(), r.get(), 4, MPFR_RNDN);
    return r;
}

InequalityReport check_eq13(const Real& height, long g, const AbelianField& reflex, const Real& c,
                            const ZeroScanReport& scan, const PrecisionContext& ctx, Inputs inputs) {
    require_region(scan, reflex, c, ctx);
    if (scan.delta_flag) return hypothesis_failed("height_upper", ctx, std::move(inputs));
    const mpfr_prec_t p = ctx.work_prec();
    Real rhs = eq13_rhs(g, fields::discriminant_log_value(reflex, p), c, p);
    return compare("height_upper", height, rhs, Orientation::Less, true, ctx, std::move(inputs));
}

InequalityReport check_eq13(const CMType& phi, const Real& c, const ZeroScanReport& scan,
                            const PrecisionContext& ctx) {
    AbelianField reflex = fields::reflex_field(phi);
    Real h = colmez::faltings_height(phi, ctx);
    Inputs inputs{{"field", describe(phi.field())}, {"cm_type", static_cast<long>(phi.mask())}};
    return check_eq13(h, phi.field().g(), reflex, c, scan, ctx, std::move(inputs));
}

namespace {

std::vector<InequalityReport> compositum_reports(const LogProduct& d1, long n1, const LogProduct& d2, long n2,
                                                 const LogProduct& d, long n, const PrecisionContext& ctx,
                                                 const Inputs& inputs) {
    std::vector<InequalityReport> out;
    out.push_back(compare_exact("compositum_root_disc", scaled(d, frac(1, n)), scaled(d1, frac(1, n1)) + scaled(d2, frac(1, n2)),
                                Orientation::Less, false, ctx, inputs));
    out.push_back(compare_exact("compositum_disc", d, scaled(d1, mpq_class(n2)) + scaled(d2, mpq_class(n1)),
                                Orientation::Less, false, ctx, inputs));
    // The compositum is Galois, so it is its own Galois closure.
    out.push_back(compare_exact("closure_root_disc", scaled(d, frac(1, n)), d, Orientation::Less, false, ctx, inputs));
    out.push_back(compare_exact("closure_disc", d, scaled(d, mpq_class(n)), Orientation::Less, false, ctx, inputs));
    return out;
}

}  // namespace

std::vector<InequalityReport> check_disc_compositum(const AbelianField& K1, const AbelianField& K2,
                                                    const PrecisionContext& ctx) {
    AbelianField K = fields::compositum(K1, K2);
    Inputs inputs{{"k1", describe(K1)}, {"k2", describe(K2)}, {"compositum", describe(K)}};
    return compositum_reports(fields::discriminant_log(K1), K1.degree(), fields::discriminant_log(K2), K2.degree(),
                              fields::discriminant_log(K), K.degree(), ctx, inputs);
}

std::vector<InequalityReport> check_disc_cyclotomic_compositum(const AbelianField& E, const PrecisionContext& ctx) {
    const long m = fields::roots_of_unity_order(E);
    const long M = m * radical(m);
    LogProduct dc = cyclotomic_disc_log(M);
    const long nc = dirichlet::euler_phi(M);
    Inputs inputs{{"k1", describe(E)}, {"k2", FieldDescriptor{M, {1}}}};
    if (M % E.modulus() == 0) {
        inputs.emplace_back("compositum", FieldDescriptor{M, {1}});
        return compositum_reports(fields::discriminant_log(E), E.degree(), dc, nc, dc, nc, ctx, inputs);
    }
    AbelianField K = fields::compositum(E, fields::cyclotomic(M));
    inputs.emplace_back("compositum", describe(K));
    return compositum_reports(fields::discriminant_log(E), E.degree(), dc, nc, fields::discriminant_log(K), K.degree(),
                              ctx, inputs);
}

InequalityReport check_nearby_reflex(const CMType& phi1, const CMType& phi2, const PrecisionContext& ctx) {
    const AbelianField& E = phi1.field();
    if (!(E == phi2.field())) throw DomainError("nearby types must belong to the same field");
    const auto& a = phi1.coset_indices();
    const auto& b = phi2.coset_indices();
    long common = 0;
    for (long x : a) common += std::count(b.begin(), b.end(), x);
    if (common != E.g() - 1) throw DomainError("CM types are not nearby");
    AbelianField R1 = fields::reflex_field(phi1), R2 = fields::reflex_field(phi2);
    LogProduct lhs = scaled(fields::discriminant_log(R1), frac(1, R1.degree())) +
                     scaled(fields::discriminant_log(R2), frac(1, R2.degree()));
    LogProduct rhs = scaled(fields::discriminant_log(E), frac(1, E.degree()));
    Inputs inputs{{"field", describe(E)},
                  {"cm_type_1", static_cast<long>(phi1.mask())},
                  {"cm_type_2", static_cast<long>(phi2.mask())},
                  {"reflex_1", describe(R1)},
                  {"reflex_2", describe(R2)}};
    return compare_exact("nearby_reflex", lhs, rhs, Orientation::Greater, false, ctx, std::move(inputs));
}

std::vector<NearbySummary> check_nearby_reflex_all(const AbelianField& E, const PrecisionContext& ctx) {
    colmez::TypeSpace space(E);
    struct Acc {
        std::uint64_t k1, k2, pairs, ex1, ex2;
    };
    std::vector<Acc> classes;
    const long g = space.g();
    space.for_each_orbit([&](std::uint64_t P, long size) {
        std::uint64_t k1 = space.stabilizer_key(P);
        for (long k = 0; k < g; ++k) {
            std::uint64_t Q = space.flip(P, k);
            std::uint64_t k2 = space.stabilizer_key(Q);
            auto it = std::find_if(classes.begin(), classes.end(), [&](const Acc& a) { return a.k1 == k1 && a.k2 == k2; });
            if (it == classes.end()) {
                classes.push_back({k1, k2, 0, space.mask_of_pattern(P), space.mask_of_pattern(Q)});
                it = classes.end() - 1;
            }
            it->pairs += static_cast<std::uint64_t>(size);
        }
    });
    std::sort(classes.begin(), classes.end(),
              [](const Acc& a, const Acc& b) { return std::tie(a.k1, a.k2) < std::tie(b.k1, b.k2); });
    std::map<std::uint64_t, std::pair<LogProduct, AbelianField>> reflex;
    auto reflex_of = [&](std::uint64_t key) -> const std::pair<LogProduct, AbelianField>& {
        auto it = reflex.find(key);
        if (it == reflex.end()) {
            AbelianField R = AbelianField::from_subgroup(E.modulus(), space.residues_of_key(key));
            LogProduct l = scaled(fields::discriminant_log(R), frac(1, R.degree()));
            it = reflex.emplace(key, std::make_pair(std::move(l), std::move(R))).first;
        }
        return it->second;
    };
    LogProduct rhs = scaled(fields::discriminant_log(E), frac(1, E.degree()));
    std::vector<NearbySummary> out;
    for (const auto& acc : classes) {
        const auto& r1 = reflex_of(acc.k1);
        const auto& r2 = reflex_of(acc.k2);
        NearbySummary s;
        s.stab1 = space.residues_of_key(acc.k1);
        s.stab2 = space.residues_of_key(acc.k2);
        s.pairs = acc.pairs;
        s.example1 = acc.ex1;
        s.example2 = acc.ex2;
        Inputs inputs{{"field", describe(E)},
                      {"reflex_1", describe(r1.second)},
                      {"reflex_2", describe(r2.second)},
                      {"pairs", static_cast<long>(acc.pairs)},
                      {"cm_type_1", static_cast<long>(acc.ex1)},
                      {"cm_type_2", static_cast<long>(acc.ex2)}};
        s.report = compare_exact("nearby_reflex", r1.first + r2.first, rhs, Orientation::Greater, false, ctx, std::move(inputs));
        out.push_back(std::move(s));
    }
    return out;
}

InequalityReport check_mu_roots_of_unity(const AbelianField& E, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.work_prec();
    long m = fields::roots_of_unity_order(E);
    long bound = 4 * E.degree() * E.degree();
    return compare("roots_of_unity", Real(m, p), Real(bound, p), Orientation::Less, false, ctx,
                   {{"field", describe(E)}, {"roots_of_unity", m}, {"bound", bound}});
}

mpz_class cyclotomic_discriminant_formula(long k) {
    if (k < 3) throw DomainError("cyclotomic_discriminant_formula: k must be at least 3");
    long phi = dirichlet::euler_phi(k);
    mpz_class num, den = 1, t;
    mpz_ui_pow_ui(num.get_mpz_t(), k, phi);
    for (auto [p, e] : dirichlet::factorize(k)) {
        (void)e;
        mpz_ui_pow_ui(t.get_mpz_t(), p, phi / (p - 1));
        den *= t;
    }
    mpz_class d = num / den;
    if ((phi / 2) % 2 == 1) d = -d;
    return d;
}

long radical(long m) {
    long r = 1;
    for (auto [p, e] : dirichlet::factorize(m)) {
        (void)e;
        r *= p;
    }
    return r;
}

InequalityReport check_cyclotomic_disc_bound(const AbelianField& E, const PrecisionContext& ctx) {
    const long n = E.degree();
    const long m = fields::roots_of_unity_order(E);
    const long M = m * radical(m);
    // E(mu_M) is Q(mu_M) when the conductor of E divides M.
    LogProduct lhs;
    FieldDescriptor top;
    if (M % E.modulus() == 0) {
        lhs = cyclotomic_disc_log(M);
        top = {M, {1}};
    } else {
        AbelianField K = fields::compositum(E, fields::cyclotomic(M));
        lhs = fields::discriminant_log(K);
        top = describe(K);
    }
    mpz_class q = 2 * n;
    q = q * q * q * q;
    LogProduct rhs = LogProduct::of(q) * mpq_class(q * n) + fields::discriminant_log(E) * mpq_class(q);
    return compare_exact("cyclotomic_compositum_disc", lhs, rhs, Orientation::Less, false, ctx,
                         {{"field", describe(E)}, {"roots_of_unity", m}, {"cyclotomic_level", M}, {"compositum", top}});
}

const char* const kBostFloor = "-0.7487525";

InequalityReport bost_report(const Real& height, long g, const PrecisionContext& ctx, Inputs inputs) {
    const mpfr_prec_t p = ctx.work_prec();
    Real v = height / g;
    return compare("bost_floor", v, Real::parse(kBostFloor, p), Orientation::Greater, false, ctx, std::move(inputs));
}

InequalityReport bost_report(const CMType& phi, const PrecisionContext& ctx) {
    Real h = colmez::faltings_height(phi, ctx);
    return bost_report(h, phi.field().g(), ctx,
                       {{"field", describe(phi.field())}, {"cm_type", static_cast<long>(phi.mask())}});
}

Real root_discriminant_ratio(const Real& height, const AbelianField& reflex, mpfr_prec_t prec) {
    Real rd = fields::discriminant_log_value(reflex, prec) / reflex.degree();
    return height / rd;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "true";
        case Verdict::Fails: return "false";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::HypothesisFailed: return "hypothesis-failed";
    }
    return "inconclusive";
}

}  // namespace cmheight::bounds
