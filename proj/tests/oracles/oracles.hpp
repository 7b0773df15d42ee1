#pragma once

// Reference implementations used only by the tests. They share the Real
// wrapper with the library but none of its algorithms.

#include <gmpxx.h>

#include <memory>
#include <vector>

#include "cmheight/characters.hpp"
#include "cmheight/fields.hpp"
#include "cmheight/real.hpp"

namespace oracle {

using cmheight::Complex;
using cmheight::Real;

// Bernoulli numbers B_0..B_n by the Akiyama-Tanigawa recurrence (B_1 = +1/2).
std::vector<mpq_class> bernoulli_at(int n);

// log Gamma(x), x > 0: recurrence up to x + N, then Stirling with the
// Bernoulli numbers above.
Real stirling_log_gamma(const Real& x, mpfr_prec_t prec);

// Digamma by the same shift and the asymptotic series of psi.
Real digamma(const Real& x, mpfr_prec_t prec);

// Riemann zeta through Borwein's acceleration of the alternating eta series.
Complex borwein_zeta(const Complex& s, mpfr_prec_t prec);

// Smallest d | n such that chi(a) = 1 for every unit a = 1 mod d.
long brute_conductor(const cmheight::dirichlet::ResidueCharacter& chi);

// m(chi) = |sum_{x in Phi} chi(x)|^2 / [E:Q], Phi a set of coset least residues.
Real fourier_multiplicity(const cmheight::fields::CMType& phi,
                          const cmheight::dirichlet::ResidueCharacter& chi, mpfr_prec_t prec);

// A0 straight from the definition: (1/|G|) sum_nu |nu Phi~ cap sigma nu Phi~| / |H|
// over residues, for every sigma in (Z/nZ)^x (indexed by residue).
std::vector<mpq_class> literal_a0(const cmheight::fields::CMType& phi);

// Class number of the imaginary quadratic order of discriminant -d by
// counting reduced forms.
long class_number(long d);

// L(s, chi_-4) = sum (-1)^k (2k+1)^-s, same acceleration as borwein_zeta.
Complex dirichlet_beta(const Complex& s, mpfr_prec_t prec);

// E = F K for a totally real F and an imaginary quadratic K of coprime
// conductor, with the CM type restricting to the identity on K above every
// real place of F.
struct QuadraticTwist {
    std::shared_ptr<const cmheight::fields::AbelianField> E;
    cmheight::fields::CMType phi;
};
QuadraticTwist quadratic_twist(const cmheight::fields::AbelianField& F, const cmheight::fields::AbelianField& K);

}  // namespace oracle
