#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "cmheight/arith.hpp"
#include "cmheight/fields.hpp"
#include "cmheight/lfun.hpp"

namespace cmheight::colmez {

using arith::PrecisionContext;
using fields::AbelianField;
using fields::CMType;
using dirichlet::ResidueCharacter;

struct Multiplicity {
    ResidueCharacter chi;
    Complex value;
};

struct ColmezProfile {
    std::shared_ptr<const AbelianField> field;
    std::uint64_t cm_type_mask = 0;
    std::vector<long> stabilizer;
    // A0 on least residues of the cosets of Stab(Phi).
    std::map<long, mpq_class> a0;
    // Over the character group of the reflex field, lifted to the modulus of E.
    std::vector<Multiplicity> multiplicities;
    mpq_class trivial_multiplicity;  // exact
    Real mu;
    Real z;
    Real height;
};

// A0(sigma) = (1/|G|) sum_nu |nu Phi~ cap sigma nu Phi~| / |H|, exact.
std::map<long, mpq_class> a0_profile(const CMType& phi);

// Holds per-field tables (character values, L'/L(0)) so that many CM types of
// one field can be processed cheaply. Thread-safe after construction.
class ProfileEngine {
public:
    ProfileEngine(std::shared_ptr<const AbelianField> E, const PrecisionContext& ctx);

    const AbelianField& field() const { return *E_; }
    const PrecisionContext& context() const { return ctx_; }

    std::map<long, mpq_class> a0(const CMType& phi) const;
    ColmezProfile profile(std::uint64_t mask) const;
    ColmezProfile profile(const CMType& phi) const;

    // -1/2 L'/L(0, chi_{E/F}) - 1/4 log(|disc E|/|disc F|).
    Real averaged_rhs() const;
    // L'/L(0, chi) + (1/2) log f(chi) for every odd chi of E, in character order.
    const std::vector<Complex>& odd_weights() const { return odd_weight_; }
    const std::vector<ResidueCharacter>& odd_primitive() const { return odd_prim_; }
    const std::vector<Complex>& odd_log_derivs() const { return odd_logderiv_; }

private:
    std::shared_ptr<const AbelianField> E_;
    PrecisionContext ctx_;
    std::vector<std::vector<long>> chi_exp_;  // [char][coset] value exponents
    std::vector<Complex> roots_;              // exp(2 pi i k / exponent)
    long root_order_ = 1;
    std::vector<bool> chi_odd_;
    std::vector<long> odd_index_;             // char index -> position among odd, or -1
    std::vector<ResidueCharacter> odd_prim_;
    std::vector<Complex> odd_logderiv_;
    std::vector<Complex> odd_weight_;
    std::vector<Real> odd_logf_;
};

std::vector<Multiplicity> multiplicities(const CMType& phi, const PrecisionContext& ctx);
ColmezProfile compute_profile(const CMType& phi, const PrecisionContext& ctx);
Real mu(const ColmezProfile& p);
Real z_value(const ColmezProfile& p);
Real faltings_height(const CMType& phi, const PrecisionContext& ctx);
Real averaged_rhs(const AbelianField& E, const PrecisionContext& ctx);
LogProduct log_disc_ratio(const AbelianField& E);

// Fundamental discriminant -d with d >= 3.
bool is_fundamental_discriminant_magnitude(long d);
// g = 1 closed form with chi_d taken as a Kronecker symbol.
Real chowla_selberg_oracle(long d, const PrecisionContext& ctx);

// Bit-level view of the CM types of a field of degree at most 64. When G/H
// is cyclic with generator gamma, bit j is the coset gamma^j H and translation
// by gamma^k is rotation; otherwise bit i is coset i and translation uses
// byte tables.
class TypeSpace {
public:
    explicit TypeSpace(const AbelianField& E);

    long degree() const { return N_; }
    long g() const { return g_; }
    bool cyclic() const { return cyclic_; }
    // Coset index of the group element with position j.
    long coset_at(long j) const { return pos_coset_[j]; }
    long position_of_coset(long c) const { return coset_pos_[c]; }
    long iota_position() const { return iota_pos_; }

    std::uint64_t translate(std::uint64_t P, long j) const {
        if (cyclic_) return j == 0 ? P : (((P << j) | (P >> (N_ - j))) & full_);
        return translate_table(P, j);
    }
    // Pattern for the CM type with the given mask and back.
    std::uint64_t pattern_of_mask(std::uint64_t mask) const;
    std::uint64_t mask_of_pattern(std::uint64_t P) const;
    // Pattern obtained by flipping the choice in conjugate pair k (positions
    // k and its conjugate).
    std::uint64_t flip(std::uint64_t P, long k) const;
    // Positions j with translate(P, j) == P.
    std::vector<long> stabilizer_positions(std::uint64_t P) const;
    // Bit j set iff position j stabilizes P.
    std::uint64_t stabilizer_key(std::uint64_t P) const;
    std::vector<long> residues_of_key(std::uint64_t key) const;
    // Stabilizer of P as a subgroup of (Z/nZ)^x (sorted residues).
    std::vector<long> stabilizer_residues(std::uint64_t P) const;
    // a0[j] = |P cap translate(P, j)| in units of |H|.
    void a0_vector(std::uint64_t P, std::vector<int>& out) const;

    // Calls f(P) for every CM type.
    void for_each_type(const std::function<void(std::uint64_t)>& f) const;
    // Calls f(P, orbit_size) once per translation orbit, with P minimal.
    void for_each_orbit(const std::function<void(std::uint64_t, long)>& f) const;

    // Position of the class of the first element of each conjugate pair.
    const std::vector<long>& pair_positions() const { return pair_pos_; }

private:
    std::uint64_t translate_table(std::uint64_t P, long j) const;

    const AbelianField* E_;
    long N_, g_;
    bool cyclic_ = false;
    std::uint64_t full_ = 0;
    std::vector<long> pos_coset_, coset_pos_;
    long iota_pos_ = 0;
    std::vector<long> pair_pos_;        // position of pair representative (pair order)
    std::vector<long> pair_conj_pos_;
    std::vector<long> prime_order_pos_; // positions of prime order, for stabilizers
    std::vector<long> divisors_;        // proper divisors of the degree (cyclic)
    std::vector<long> mul_;             // position * position -> position (non-cyclic)
    std::vector<std::uint64_t> table_;  // [j][byte][value]
};

// Heights of all CM types of E through the class-function kernel
// h = -(1/|G/H|) sum_sigma A0(sigma) W(sigma).
class HeightKernel {
public:
    HeightKernel(const TypeSpace& space, const ProfileEngine& engine);
    Real height(std::uint64_t P) const;

private:
    const TypeSpace& space_;
    std::vector<Real> W_;  // by position
    mpfr_prec_t prec_;
};

struct StructuralStats {
    std::uint64_t types = 0;
    std::uint64_t trivial_failures = 0;  // sum A0 != |G/H| g / 2
    Real max_even;                       // max |m(chi)| over even nontrivial chi
    std::size_t distinct_pair_sums = 0;
};

// m(1) exactly and m(even) numerically for every CM type of E.
StructuralStats structural_check(const AbelianField& E, const PrecisionContext& ctx);

}  // namespace cmheight::colmez
