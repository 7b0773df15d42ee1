#pragma once

#include <gmpxx.h>

#include <vector>

#include "cmheight/errors.hpp"
#include "cmheight/real.hpp"

namespace cmheight::arith {

// Working precision and the assertion tolerance derived from it.
class PrecisionContext {
public:
    static constexpr int kMinBits = 64;
    static constexpr int kGuardBits = 32;

    explicit PrecisionContext(int bits = 128);
    PrecisionContext(int bits, const Real& eps);

    int bits() const { return bits_; }
    // Precision used for intermediate sums.
    mpfr_prec_t work_prec() const { return bits_ + kGuardBits; }
    const Real& eps() const { return eps_; }
    // 2^e at working precision.
    Real pow2(long e) const { return cmheight::pow2(e, bits_); }

private:
    int bits_;
    Real eps_;
};

// B_0 .. B_{2k} with B_1 = -1/2; exact rationals.
const std::vector<mpq_class>& bernoulli_numbers();
mpq_class bernoulli(int n);

Real log_gamma(const Real& x, const PrecisionContext& ctx);
Real log_gamma(const mpq_class& x, const PrecisionContext& ctx);
// Principal branch for Re z > 0: shifted Stirling series, tail checked.
Complex log_gamma(const Complex& z, const PrecisionContext& ctx);

// psi(1/2) = Gamma'(1/2)/Gamma(1/2).
Real digamma_half(const PrecisionContext& ctx);

struct HurwitzOptions {
    int shift = 0;          // 0 selects max(ceil(bits/2), 30)
    int bernoulli_terms = 20;
    int max_doublings = 12;
};

// zeta(s, x) for 0 < x <= 1 by Euler-Maclaurin summation. The first omitted
// correction term bounds the remainder; if it does not reach 2^-(bits+8)
// relative to the value, the shift is doubled up to max_doublings times.
Complex hurwitz_zeta(const Complex& s, const Real& x, const PrecisionContext& ctx,
                     const HurwitzOptions& opt = {});
Real hurwitz_zeta(const Real& s, const Real& x, const PrecisionContext& ctx,
                  const HurwitzOptions& opt = {});

}  // namespace cmheight::arith
