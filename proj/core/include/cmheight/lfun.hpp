#pragma once

#include <optional>
#include <vector>

#include "cmheight/arith.hpp"
#include "cmheight/characters.hpp"

namespace cmheight::lfun {

using arith::PrecisionContext;
using dirichlet::ResidueCharacter;

// Element sum_k coeffs[k] * zeta_order^k of Q(zeta_order).
struct CyclotomicNumber {
    long order = 1;
    std::vector<mpq_class> coeffs;
    Complex value(mpfr_prec_t prec) const;
};

// L(s, chi) = f^-s sum_{a=1}^{f} chi(a) zeta(s, a/f) for primitive chi.
Complex l_value(const ResidueCharacter& chi, const Complex& s, const PrecisionContext& ctx);
Complex l_value(const ResidueCharacter& chi, const Real& s, const PrecisionContext& ctx);

// L(0, chi) = -(1/f) sum a chi(a) for odd primitive chi, exact.
CyclotomicNumber l_at_zero(const ResidueCharacter& chi);
Complex l_at_zero_value(const ResidueCharacter& chi, const PrecisionContext& ctx);

// L'(0, chi)/L(0, chi) = -log f + sum chi(a) log Gamma(a/f) / L(0, chi).
// Results are memoised per (character, precision).
Complex l_log_deriv_at_zero(const ResidueCharacter& chi, const PrecisionContext& ctx);

// f^(s/2) pi^(-(s+1)/2) Gamma((s+1)/2) L(s, chi) for odd primitive chi.
Complex completed_lambda(const ResidueCharacter& chi, const Complex& s, const PrecisionContext& ctx);

struct RootNumberReport {
    Real max_deviation;   // max_s | |Lambda(s)/Lambda(1-s, conj)| - 1 |
    Real ratio_spread;    // max_s |ratio(s) - ratio(1/2)|
    Complex root_number;  // ratio at s = 1/2
};

RootNumberReport root_number_check(const ResidueCharacter& chi, const PrecisionContext& ctx);

struct ZeroScanReport {
    Real region_left;
    Real region_right;  // exclusive
    Real step;
    Real min_abs;
    long sign_changes = 0;
    long grid_points = 0;
    bool delta_flag = false;
    std::optional<Real> beta_estimate;
    bool evidence_only = true;
};

struct ScanOptions {
    // Scan each character separately (|L|^2 for non-real ones) instead of
    // the product.
    bool per_character = false;
};

// Real-axis scan of prod L(s, chi) over [1 - c/disc_log, 1). The product is
// expanded as a Taylor polynomial in s - 1, validated against direct
// evaluations at three interior points, and evaluated on the grid.
ZeroScanReport stark_zero_scan(const std::vector<ResidueCharacter>& characters, const Real& disc_log,
                               const Real& c, const Real& step_fraction, const PrecisionContext& ctx,
                               const ScanOptions& opt = {});

// Coefficients of prod L(1 + t, chi) in t up to the degree needed on
// |t| <= radius.
std::vector<Real> product_taylor_model(const std::vector<ResidueCharacter>& characters, const Real& radius,
                                       const PrecisionContext& ctx);

}  // namespace cmheight::lfun
