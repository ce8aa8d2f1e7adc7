// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_QUANTIZE_HPP
#define COHSTATE_QUANTIZE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "cohstate/families.hpp"
#include "cohstate/fock.hpp"
#include "cohstate/quadrature.hpp"

// Coherent-state quantization for the AN families: the function -> operator
// map built from the resolution of the identity, weighted ladder operators
// and their commutator spectra, lower symbols, eigenstate residuals, the
// vacuum construction formula, and displacement-operator states with
// group-theoretic generator pairs.

namespace cohstate::quantize {

using families::FamilySpec;
using fock::complexd;
using fock::FockCutoff;
using fock::FockOperator;
using fock::FockVector;

struct Quantizer {
  FamilySpec spec;
  FockCutoff cutoff;
  quadrature::QuadratureSpec qspec;
  // positive modulation n(u) of the weight, w~ = n w; identity by default
  std::function<double(double)> weight_mod;
};

// Validates that the family is AN class with an available identity weight.
Quantizer make_quantizer(FamilySpec spec, FockCutoff cutoff,
                         quadrature::QuadratureSpec qspec = {},
                         std::function<double(double)> weight_mod = nullptr);

// f(alpha) = g(u) e^{i m arg alpha}; finite linear combinations of these
// cover everything the angular reduction can certify with 1D integrals.
struct SeparableSymbol {
  int m = 0;
  std::function<double(double)> g;
};

// <n|A_f|n'> = int w~(u) g(u) u^{(n+n')/2} h_n h_n' du on the band
// n' - n = m, zero elsewhere; Hermitian for m = 0.
FockOperator quantize_symbol(const Quantizer& qz, const SeparableSymbol& sym);

// Superdiagonal entries a_{n-1,n} = int w~ u^n h_{n-1} h_n du, n = 1..count.
std::vector<double> lowering_entries(const Quantizer& qz, int count);

// The weighted lowering operator (the quantization of alpha itself).
FockOperator lowering_operator(const Quantizer& qz);

// Diagonal of [a^h, a^h+]: X_{n+1} - X_n with X_n = a_{n-1,n}^2, checked
// against the factored product-of-integrals form.
struct CommutatorCheck {
  std::vector<double> direct;    // X_{n+1} - X_n
  std::vector<double> factored;  // product of the two integrals
  double max_deviation = 0.0;
};
std::vector<double> commutator_spectrum(const Quantizer& qz);
CommutatorCheck commutator_check(const Quantizer& qz);

// <alpha|op|alpha> from the coefficient vector.
complexd lower_symbol(const Quantizer& qz, const FockOperator& op, complexd alpha);

// tau(u) with  <alpha|a^h|alpha> = alpha tau(u); last_term_fraction flags
// slow convergence of the series near the domain edge.
struct TauResult {
  double value = 0.0;
  double last_term_fraction = 0.0;
};
TauResult lowering_weight_tau(const Quantizer& qz, double u);

// || a^h |alpha> - alpha |alpha> || on rows 0..n_max-1.
double eigenstate_residual(const Quantizer& qz, complexd alpha);

// N(alpha a^h+)/sqrt(N(u)) |0> for the deformed-Poissonian families, applied
// as a power series of the exact raising matrix.  Must reproduce
// coefficients() to 1e-10.
FockVector construct_from_vacuum(const FamilySpec& spec, complexd alpha,
                                 const FockCutoff& cutoff);

// exp(a plus - conj(a) minus) |s>; requires minus = plus^dagger to 1e-12.
FockVector displacement_cs(const FockOperator& plus, const FockOperator& minus,
                           complexd alpha_breve, int s);

// Group generator pairs (plus, minus = plus^dagger) on the truncated basis.
// su2: J_+ raises the weight, i.e. lowers the Fock index n, with
//      <n-1|J_+|n> = sqrt(n (n_j - n + 1)); the displaced |s=0> orbit is the
//      spin family, and the displaced |s> orbit equals the jacobi-spin
//      family times the global phase e^{-i s arg alpha} (exactly, and with
//      no phase at real alpha).
// su11: <n+1|K_+|n> = sqrt((n+1)(2 kappa + n)); displaced |s> orbits equal
//      the corresponding family coefficients with no phase adjustment.
// weyl: plus = a^dagger; displaced |s> orbits are the displaced-number
//      family.
std::pair<FockOperator, FockOperator> su2_generators(int n_j);
std::pair<FockOperator, FockOperator> su11_generators(double kappa, int n_max);
std::pair<FockOperator, FockOperator> weyl_generators(int n_max);

// Displacement parameters of the group orbits:
//   sigma_alpha = -atan|alpha| e^{-i arg alpha}   (SU(2))
//   rho_alpha   = atanh|alpha| e^{i arg alpha}    (SU(1,1))
complexd su2_parameter(complexd alpha);
complexd su11_parameter(complexd alpha);

// Displacement orbit of the vacuum under the integral-built ladder pair,
// compared against the family profile h_n.  The relation between the two is
// an open program except for the group cases, so this only reports the
// deviation.
struct DisplacementProfileReport {
  std::vector<double> h_disp;
  std::vector<double> h_family;
  double max_deviation = 0.0;
};
DisplacementProfileReport compare_displacement_profile(const Quantizer& qz, complexd alpha_breve);

}  // namespace cohstate::quantize

#endif  // COHSTATE_QUANTIZE_HPP
