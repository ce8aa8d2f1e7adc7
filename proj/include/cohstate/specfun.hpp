// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_SPECFUN_HPP
#define COHSTATE_SPECFUN_HPP

#include <complex>

// Special functions used throughout the library: orthogonal polynomials
// (Hermite in the physicists' convention, generalized Laguerre, Jacobi with
// negative-integer-parameter continuation), Bessel J/I/K, log-gamma helpers,
// and the symmetric q-calculus primitives.  Everything here is a pure
// function of its arguments and safe to call from any thread.

namespace cohstate::specfun {

// H_n(z), physicists' convention: H_0 = 1, H_1(z) = 2z,
// H_{n+1}(z) = 2 z H_n(z) - 2 n H_{n-1}(z).
std::complex<double> hermite(int n, std::complex<double> z);
double hermite(int n, double x);

// Generalized Laguerre L_n^{(a)}(x) by the stable three-term recurrence.
// L_n^{(a)}(0) = binomial(n + a, n).
double laguerre(int n, double a, double x);

// Jacobi P_n^{(a,b)}(x).  Negative-integer a with |a| <= n is rewritten
// through the identity
//   P_n^{(-a,b)}(x) = [C(n+b,a)/C(n,a)] ((x-1)/2)^a P_{n-a}^{(a,b)}(x),
// which removes the apparent singularity of the direct formula; mirrored
// for negative-integer b via P_n^{(a,b)}(x) = (-1)^n P_n^{(b,a)}(-x).
double jacobi(int n, double a, double b, double x);

// Same polynomial evaluated by the explicit finite sum
//   P_n^{(a,b)}(x) = 2^{-n} sum_s C(n+a,s) C(n+b,n-s) (x-1)^{n-s} (x+1)^s ;
// used as the second route for recurrence cross-checks.
double jacobi_sum(int n, double a, double b, double x);

// Bessel J_n(x), integer order.  Miller's backward recurrence normalized by
// J_0 + 2 sum_k J_{2k} = 1; relative error ~1e-13 for |x| <= 50, n <= 200.
double bessel_j(int n, double x);

// Modified Bessel I_nu(x), nu >= 0, x >= 0 (ascending series; all terms
// positive so there is no cancellation).
double bessel_i(double nu, double x);

// Modified Bessel K_nu(x), nu >= 0, x > 0, via the integral representation
// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.  Throws std::domain_error
// for x <= 0.
double bessel_k(double nu, double x);

double log_gamma(double x);
double log_factorial(int n);
double factorial(int n);

// C(x, k) for real x and integer k >= 0, as the falling-factorial product.
double binomial(double x, int k);
// log C(n, k) for integer arguments, exact in log space.
double log_binomial(int n, int k);

// Symmetric (bosonic) q-deformation [n]_q = (q^n - q^{-n})/(q - q^{-1}),
// invariant under q <-> 1/q.  The q -> 1 limit is handled by a Taylor
// branch in log q; [n]_1 = n.
double q_number(int n, double q);
double q_factorial(int n, double q);
double q_log_factorial(int n, double q);

// q-exponentials associated with the symmetric deformation:
//   e_q(u) = sum_n u^n / [n]_q!          (entire for every q > 0)
//   E_q(u) = sum_n q^{n(n+1)/2} u^n / [n]_q!
// E_q is entire for 0 < q <= 1 and has convergence radius 1/(q - q^{-1})
// for q > 1; q_exp_big throws std::domain_error outside that disk.
double q_exp_small(double u, double q);
double q_exp_big(double u, double q);

// Deformation-parameter wrapper carrying the convergence-radius flag.
struct QDeformation {
  double q;

  explicit QDeformation(double q_);
  bool entire_big_exponential() const { return q <= 1.0; }
  double big_exponential_radius() const;  // inf for q <= 1
};

}  // namespace cohstate::specfun

#endif  // COHSTATE_SPECFUN_HPP
