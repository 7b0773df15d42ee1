#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cmheight/colmez.hpp"

namespace cmheight::bounds {

using arith::PrecisionContext;
using fields::AbelianField;
using fields::CMType;
using dirichlet::ResidueCharacter;
using lfun::ZeroScanReport;

struct FieldDescriptor {
    long modulus = 1;
    std::vector<long> subgroup_generators;
    friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

FieldDescriptor describe(const AbelianField& E);
AbelianField from_descriptor(const FieldDescriptor& d);

using InputValue = std::variant<std::string, long, FieldDescriptor>;
using Inputs = std::vector<std::pair<std::string, InputValue>>;

enum class Verdict { Holds, Fails, Inconclusive, HypothesisFailed };

// lhs < rhs (Less) or lhs > rhs (Greater); margin is positive when the
// inequality holds.
enum class Orientation { Less, Greater };

struct InequalityReport {
    std::string name;
    Real lhs;
    Real rhs;
    Real margin;
    Verdict holds = Verdict::Inconclusive;
    Orientation orientation = Orientation::Less;
    bool strict = true;
    bool exact = false;  // margin decided by exact log arithmetic
    Inputs inputs;

    bool passed() const { return holds == Verdict::Holds; }
};

// Numeric comparison. |margin| below 64 eps max(1, |lhs|, |rhs|) is inconclusive.
InequalityReport compare(std::string name, const Real& lhs, const Real& rhs, Orientation o, bool strict,
                         const PrecisionContext& ctx, Inputs inputs = {});
// Exact comparison of Q-linear combinations of logs of integers.
InequalityReport compare_exact(std::string name, const LogProduct& lhs, const LogProduct& rhs, Orientation o,
                               bool strict, const PrecisionContext& ctx, Inputs inputs = {});
InequalityReport hypothesis_failed(std::string name, const PrecisionContext& ctx, Inputs inputs = {});

// Same inequality written the other way round.
InequalityReport reversed(const InequalityReport& r, const PrecisionContext& ctx);

// c' of the c-region bound.
Real c_prime(const Real& c);
// Left end 1 - c / log|disc K| of the Stark interval.
Real stark_left(const AbelianField& K, const Real& c, mpfr_prec_t prec);

// Odd characters of K with the product closed under conjugation; the scan
// used for K in all checks.
ZeroScanReport scan_field(const AbelianField& K, const Real& c, const Real& step_fraction,
                          const PrecisionContext& ctx);

// Lower and upper bounds for -(L'/L(0,chi) + L'/L(0,conj chi) + 2 delta/(1 - beta)).
// chi is a character of the reflex field (any modulus whose lift lies in its
// character group); the scan must cover its Stark region at c = 1/4.
std::pair<InequalityReport, InequalityReport> check_eq6(const AbelianField& reflex, const ResidueCharacter& chi,
                                                        const ZeroScanReport& scan, const PrecisionContext& ctx);
std::pair<InequalityReport, InequalityReport> check_eq6(const CMType& phi, const ResidueCharacter& chi,
                                                        const ZeroScanReport& scan, const PrecisionContext& ctx);

Real eq13_rhs(long g, const Real& reflex_disc_log, const Real& c, mpfr_prec_t prec);
InequalityReport check_eq13(const Real& height, long g, const AbelianField& reflex, const Real& c,
                            const ZeroScanReport& scan, const PrecisionContext& ctx, Inputs inputs = {});
InequalityReport check_eq13(const CMType& phi, const Real& c, const ZeroScanReport& scan,
                            const PrecisionContext& ctx);

// Root discriminant and discriminant of K1 K2 against K1, K2, then the same
// for the Galois closure, which is K1 K2 itself.
std::vector<InequalityReport> check_disc_compositum(const AbelianField& K1, const AbelianField& K2,
                                                    const PrecisionContext& ctx);

// (E, Q(mu_M)) with M = m rad(m), m the number of roots of unity in E.
std::vector<InequalityReport> check_disc_cyclotomic_compositum(const AbelianField& E, const PrecisionContext& ctx);
// Sum of log f(chi) over all characters mod M.
LogProduct cyclotomic_disc_log(long M);

// Requires |Phi1 cap Phi2| = g - 1 (for g = 1, Phi2 = conjugate of Phi1).
InequalityReport check_nearby_reflex(const CMType& phi1, const CMType& phi2, const PrecisionContext& ctx);

struct NearbySummary {
    std::vector<long> stab1, stab2;
    std::uint64_t pairs = 0;
    std::uint64_t example1 = 0, example2 = 0;  // masks
    InequalityReport report;
};
// All ordered nearby pairs of E grouped by the pair of stabilizers.
std::vector<NearbySummary> check_nearby_reflex_all(const AbelianField& E, const PrecisionContext& ctx);

InequalityReport check_mu_roots_of_unity(const AbelianField& E, const PrecisionContext& ctx);

// disc Q(mu_k) = (-1)^(phi(k)/2) k^phi(k) / prod_{p | k} p^(phi(k)/(p-1)).
mpz_class cyclotomic_discriminant_formula(long k);
long radical(long m);
InequalityReport check_cyclotomic_disc_bound(const AbelianField& E, const PrecisionContext& ctx);

// h/g against a pinned floor; a regression report.
extern const char* const kBostFloor;
InequalityReport bost_report(const Real& height, long g, const PrecisionContext& ctx, Inputs inputs = {});
InequalityReport bost_report(const CMType& phi, const PrecisionContext& ctx);

// h / ((1/[E*:Q]) log|disc E*|).
Real root_discriminant_ratio(const Real& height, const AbelianField& reflex, mpfr_prec_t prec);

std::string verdict_name(Verdict v);

}  // namespace cmheight::bounds
