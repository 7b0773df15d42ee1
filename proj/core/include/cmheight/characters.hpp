#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cmheight/errors.hpp"
#include "cmheight/real.hpp"

namespace cmheight::dirichlet {

long gcd(long a, long b);
long lcm(long a, long b);
long euler_phi(long n);
// Prime factorisation as (p, e) pairs, ascending.
std::vector<std::pair<long, int>> factorize(long n);
long mod(long a, long n);

struct CyclicFactor {
    long generator;  // residue mod n
    long order;
    long prime;      // prime of the local component this factor lives in
};

// (Z/nZ)^x as a product of cyclic factors, one per odd prime power and up to
// two for the 2-part (generated by -1 and 5).
class UnitGroup {
public:
    explicit UnitGroup(long n);

    long modulus() const { return n_; }
    const std::vector<long>& elements() const { return elements_; }
    const std::vector<CyclicFactor>& generators() const { return gens_; }
    long iota() const { return iota_; }
    long order() const { return static_cast<long>(elements_.size()); }
    // Exponent of the group (lcm of generator orders).
    long exponent() const { return exponent_; }

    bool contains(long a) const;
    // Position of a in elements(); -1 if a is not a unit.
    long index_of(long a) const;
    // Discrete logarithm of a with respect to generators().
    const std::vector<long>& dlog(long a) const;
    long mul(long a, long b) const;
    long inverse(long a) const;
    long power(long a, long k) const;

private:
    long n_;
    long iota_;
    long exponent_ = 1;
    std::vector<long> elements_;
    std::vector<CyclicFactor> gens_;
    std::vector<long> index_;                 // residue -> position
    std::vector<std::vector<long>> dlogs_;    // position -> exponents
};

using UnitGroupPtr = std::shared_ptr<const UnitGroup>;

// n >= 3; domain error otherwise.
UnitGroupPtr unit_group(long n);
// Also accepts n = 1 and n = 2 (trivial groups).
UnitGroupPtr unit_group_any(long n);

// chi(g_i) = exp(2 pi i e_i / ord(g_i)) on the fixed generators.
class ResidueCharacter {
public:
    ResidueCharacter(UnitGroupPtr group, std::vector<long> exponents);

    const UnitGroup& group() const { return *group_; }
    const UnitGroupPtr& group_ptr() const { return group_; }
    long modulus() const { return group_->modulus(); }
    const std::vector<long>& exponents() const { return exps_; }
    long order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }

    // chi(a) = exp(2 pi i k / order()); returns k in [0, order()), or -1 when
    // gcd(a, n) > 1.
    long value_exponent(long a) const;
    Complex value(long a, mpfr_prec_t prec) const;
    ResidueCharacter conj() const;
    ResidueCharacter operator*(const ResidueCharacter& o) const;

    std::string to_string() const;

    friend bool operator==(const ResidueCharacter& a, const ResidueCharacter& b) {
        return a.modulus() == b.modulus() && a.exps_ == b.exps_;
    }
    friend bool operator<(const ResidueCharacter& a, const ResidueCharacter& b);

private:
    UnitGroupPtr group_;
    std::vector<long> exps_;
    long order_ = 1;
    long scale_ = 1;  // exponent() / order()
    std::vector<long> weights_;  // exponent()/ord(g_i) * e_i, reduced mod exponent()
};

// All phi(n) characters, lexicographic in the exponent vector; trivial first.
std::vector<ResidueCharacter> characters(const UnitGroupPtr& G);

long conductor(const ResidueCharacter& chi);
ResidueCharacter primitive_of(const ResidueCharacter& chi);
bool is_odd(const ResidueCharacter& chi);
// Same character viewed modulo a multiple m of its modulus.
ResidueCharacter lift_to(const ResidueCharacter& chi, long m);

}  // namespace cmheight::dirichlet
