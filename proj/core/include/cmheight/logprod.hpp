#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "cmheight/real.hpp"

namespace cmheight {

// Exact element of the Q-span of {log p}: sum over primes of q_p log p.
// Equality is decided exactly; order needs a numeric evaluation.
class LogProduct {
public:
    LogProduct() = default;
    // log |n| for n != 0.
    static LogProduct of(const mpz_class& n);
    static LogProduct of(long n) { return of(mpz_class(n)); }

    const std::map<long, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    LogProduct& operator+=(const LogProduct& o);
    LogProduct& operator-=(const LogProduct& o);
    LogProduct& operator*=(const mpq_class& q);
    friend LogProduct operator+(LogProduct a, const LogProduct& b) { return a += b; }
    friend LogProduct operator-(LogProduct a, const LogProduct& b) { return a -= b; }
    friend LogProduct operator*(LogProduct a, const mpq_class& q) { return a *= q; }
    friend LogProduct operator*(const mpq_class& q, LogProduct a) { return a *= q; }
    friend bool operator==(const LogProduct& a, const LogProduct& b) { return a.terms_ == b.terms_; }

    Real value(mpfr_prec_t prec) const;
    // Human-readable form such as "3*log(5) - 1/2*log(2)".
    std::string to_string() const;

private:
    void add_term(long p, const mpq_class& q);
    std::map<long, mpq_class> terms_;
};

}  // namespace cmheight
