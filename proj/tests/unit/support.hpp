#pragma once

#include <gtest/gtest.h>

#include <string>

#include "cmheight/real.hpp"

namespace testing_support {

using cmheight::Complex;
using cmheight::Real;

inline Real num(const std::string& s, mpfr_prec_t prec = 256) { return Real::parse(s, prec); }

// |a - b| < tol, with the values in the failure message.
inline ::testing::AssertionResult close(const Real& a, const Real& b, const Real& tol) {
    Real d = abs(a - b);
    if (d < tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << a.to_string(40) << " vs " << b.to_string(40) << " differ by "
                                         << d.to_string(6) << " >= " << tol.to_string(6);
}

inline ::testing::AssertionResult close(const Complex& a, const Complex& b, const Real& tol) {
    Real d = abs(a - b);
    if (d < tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "(" << a.re.to_string(30) << ", " << a.im.to_string(30) << ") vs ("
                                         << b.re.to_string(30) << ", " << b.im.to_string(30) << ") differ by "
                                         << d.to_string(6);
}

inline Real two_to(long e) { return cmheight::pow2(e, 256); }

}  // namespace testing_support
