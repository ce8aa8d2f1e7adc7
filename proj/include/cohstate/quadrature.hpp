// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_QUADRATURE_HPP
#define COHSTATE_QUADRATURE_HPP

#include <functional>
#include <string>
#include <vector>

#include "cohstate/families.hpp"

// Numerical certification engine for the resolution-of-identity moment
// problems: an adaptive Gauss-Kronrod integrator with semi-infinite maps,
// per-family moment verification, and the Gram identity check.

namespace cohstate::quadrature {

using families::FamilySpec;

class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

enum class SemiInfiniteMap {
  ExpMap,      // u = -log(1-v): for exponentially decaying integrands
  RationalMap  // u = v/(1-v): for algebraic or log-normal tails
};

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  SemiInfiniteMap map = SemiInfiniteMap::ExpMap;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Adaptive G7/K15 on a finite interval.
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& qspec);

// Integral of f over [0, r_squared); r_squared may be infinite, in which case
// qspec.map selects the change of variables.
IntegralResult radial_integral(const std::function<double(double)>& f, double r_squared,
                               const QuadratureSpec& qspec);

// Integral of f over the family's radial domain with the change of variables
// matched to the family's weight class: sqrt softening of the u = 1 endpoint
// for SU(1,1), t = sqrt(u) for the Bessel-K weights, a rational map for the
// algebraically decaying and log-normal weights, an exponential map
// otherwise.  scale_hint ~ the u-scale where the integrand peaks.
IntegralResult family_radial_integral(const FamilySpec& spec,
                                      const std::function<double(double)>& f,
                                      double scale_hint, const QuadratureSpec& qspec);

struct VerificationReport {
  std::string target;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  long evaluations = 0;
};

// |int w(u) u^n h_n(u)^2 du - 1|, pass threshold 1e-6 (an order looser than
// the quadrature tolerance, absorbing special-function error).
VerificationReport verify_moment_problem(const FamilySpec& spec, int n,
                                         const QuadratureSpec& qspec);

struct GramResult {
  VerificationReport report;
  std::vector<std::vector<double>> gram;  // G_{nn'}, n,n' <= N
};

// Gram matrix of the resolution of the identity, n, n' <= N.  For the
// rotation-invariant families the angular phases integrate to 2 pi delta
// exactly, so the off-diagonal entries vanish identically and the numerical
// content is the diagonal; the holomorphic Hermite family is verified by a
// full 2D Gauss-Hermite tensor rule instead.  N is capped at the space
// dimension for the finite families.
GramResult gram_identity(const FamilySpec& spec, int n_upper, const QuadratureSpec& qspec);

inline constexpr double kPassThreshold = 1e-6;

// Gauss-Hermite nodes/weights for weight e^{-x^2} (Newton on the recurrence).
void gauss_hermite(int m, std::vector<double>& nodes, std::vector<double>& weights);

// int_0^inf J_nu(2t)^2 / t dt evaluated by integrating between consecutive
// Bessel zeros and extrapolating the partial sums (Richardson at doubling
// checkpoints).  Used by the Susskind-Glogower moment problem.
IntegralResult bessel_squared_over_t(int nu, const QuadratureSpec& qspec);

}  // namespace cohstate::quadrature

#endif  // COHSTATE_QUADRATURE_HPP
