#include "cmheight/logprod.hpp"

#include <sstream>

#include "cmheight/errors.hpp"

namespace cmheight {

LogProduct LogProduct::of(const mpz_class& n_in) {
    if (n_in == 0) throw DomainError("log of zero");
    mpz_class n = abs(n_in);
    LogProduct r;
    for (long p = 2; n > 1; ++p) {
        if (mpz_class(p) * p > n) {
            if (!n.fits_slong_p()) throw DomainError("LogProduct: prime factor too large");
            r.add_term(n.get_si(), 1);
            break;
        }
        long e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e) r.add_term(p, e);
    }
    return r;
}

void LogProduct::add_term(long p, const mpq_class& q) {
    mpq_class& t = terms_[p];
    t += q;
    if (t == 0) terms_.erase(p);
}

LogProduct& LogProduct::operator+=(const LogProduct& o) {
    for (const auto& [p, q] : o.terms_) add_term(p, q);
    return *this;
}

LogProduct& LogProduct::operator-=(const LogProduct& o) {
    for (const auto& [p, q] : o.terms_) add_term(p, -q);
    return *this;
}

LogProduct& LogProduct::operator*=(const mpq_class& q) {
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [p, t] : terms_) t *= q;
    return *this;
}

Real LogProduct::value(mpfr_prec_t prec) const {
    Real sum(prec + 32);
    for (const auto& [p, q] : terms_) {
        Real l = log_integer(mpz_class(p), prec + 32);
        l *= Real(q, prec + 32);
        sum += l;
    }
    sum.round_to(prec);
    return sum;
}

std::string LogProduct::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, q] : terms_) {
        mpq_class a = abs(q);
        if (!first) os << (q < 0 ? " - " : " + ");
        else if (q < 0) os << "-";
        if (a != 1) os << a.get_str() << "*";
        os << "log(" << p << ")";
        first = false;
    }
    return os.str();
}

}  // namespace cmheight
