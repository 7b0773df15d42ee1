#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cmheight/characters.hpp"
#include "cmheight/logprod.hpp"

namespace cmheight::fields {

using dirichlet::ResidueCharacter;

// Fixed field of a subgroup H of (Z/nZ)^x, stored with n equal to the
// conductor of the field. The rationals are modulus 1.
class AbelianField {
public:
    // Canonicalises; H must be a subgroup of (Z/nZ)^x.
    static AbelianField from_subgroup(long n, const std::vector<long>& H);

    long modulus() const { return n_; }
    const std::vector<long>& subgroup() const { return H_; }
    long degree() const { return degree_; }
    // Half the degree; meaningful for CM fields.
    long g() const { return degree_ / 2; }
    bool is_cm() const { return cm_; }
    bool is_totally_real() const { return !cm_; }
    bool is_rational() const { return degree_ == 1; }
    bool contains(long a) const;  // a in H

    const dirichlet::UnitGroupPtr& group() const { return G_; }
    // Characters of (Z/nZ)^x trivial on H, in the order of dirichlet::characters.
    const std::vector<ResidueCharacter>& character_group() const { return chars_; }
    std::vector<ResidueCharacter> odd_characters() const;

    // Greedy generating set of H (ascending residues).
    const std::vector<long>& subgroup_generators() const { return gens_; }

    // Cosets of H, ordered by least residue; each coset sorted.
    const std::vector<std::vector<long>>& cosets() const { return cosets_; }
    long coset_index(long a) const;
    long coset_mul(long i, long j) const { return mul_[i * degree_ + j]; }
    long iota_coset() const { return iota_coset_; }

    // Conjugate pairs by representative least residue: pairs()[k] = {rep, conj}.
    const std::vector<std::pair<long, long>>& pairs() const { return pairs_; }

    std::string to_string() const;
    friend bool operator==(const AbelianField& a, const AbelianField& b) {
        return a.n_ == b.n_ && a.H_ == b.H_;
    }
    friend bool operator<(const AbelianField& a, const AbelianField& b);

private:
    long n_ = 1;
    std::vector<long> H_;
    std::vector<long> gens_;
    long degree_ = 1;
    bool cm_ = false;
    dirichlet::UnitGroupPtr G_;
    std::vector<ResidueCharacter> chars_;
    std::vector<std::vector<long>> cosets_;
    std::vector<long> coset_of_;  // residue -> coset index, -1 for non-units
    std::vector<long> mul_;
    long iota_coset_ = 0;
    std::vector<std::pair<long, long>> pairs_;
};

// Subgroup of (Z/nZ)^x generated by the given residues, sorted.
std::vector<long> generate_subgroup(long n, const std::vector<long>& generators);

// Demands a CM field (-1 not in H) unless require_cm is false.
AbelianField make_field(long n, const std::vector<long>& generators, bool require_cm = true);
AbelianField rationals();
AbelianField cyclotomic(long k);

AbelianField max_real_subfield(const AbelianField& E);

// One element of each conjugate pair; bit k of the mask (counted from the most
// significant of g bits) selects the conjugate in pair k.
class CMType {
public:
    CMType(std::shared_ptr<const AbelianField> field, std::uint64_t mask);

    const AbelianField& field() const { return *field_; }
    const std::shared_ptr<const AbelianField>& field_ptr() const { return field_; }
    std::uint64_t mask() const { return mask_; }
    // Coset indices, in pair order.
    const std::vector<long>& coset_indices() const { return cosets_; }
    // The cosets as residue lists, in pair order.
    std::vector<std::vector<long>> cosets() const;
    // Indicator of the lift to G/H, indexed by coset.
    std::vector<bool> lifted() const;
    CMType conjugate() const;

private:
    std::shared_ptr<const AbelianField> field_;
    std::uint64_t mask_;
    std::vector<long> cosets_;
};

std::uint64_t cm_type_count(const AbelianField& E);
std::vector<CMType> cm_types(const std::shared_ptr<const AbelianField>& E);
// Mask of the type whose lift is the given coset indicator.
std::uint64_t mask_of(const AbelianField& E, const std::vector<bool>& lifted);

std::vector<long> stabilizer(const CMType& phi);
AbelianField reflex_field(const CMType& phi);

// |disc K| as an exact log and disc K as a signed integer.
LogProduct discriminant_log(const AbelianField& K);
mpz_class discriminant_exact(const AbelianField& K);
Real discriminant_log_value(const AbelianField& K, mpfr_prec_t prec);

AbelianField compositum(const AbelianField& K1, const AbelianField& K2);
// Whether K1 is a subfield of K2.
bool is_subfield(const AbelianField& K1, const AbelianField& K2);

long roots_of_unity_order(const AbelianField& E);
bool contains_imag_quadratic(const AbelianField& E);

// Every subfield of Q(mu_n) with conductor exactly n, ordered by subgroup.
std::vector<AbelianField> fields_of_conductor(long n);

}  // namespace cmheight::fields
