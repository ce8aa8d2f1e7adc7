// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_FAMILIES_HPP
#define COHSTATE_FAMILIES_HPP

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cohstate/fock.hpp"

// Coefficient engines for the coherent-state families.  Each family maps a
// complex amplitude alpha (with u = |alpha|^2) to a normalized Fock
// expansion phi_n(alpha); the radially reducible families additionally
// expose their profile h_n(u), the weight w(u) that resolves the identity,
// and closed-form photon means where those exist.

namespace cohstate::families {

using fock::complexd;
using fock::FockCutoff;
using fock::FockVector;
using fock::truncation_error;

// Requested operation is not defined for the family (e.g. the identity
// weight of the q-deformed family at q > 1, whose moment-problem solution
// only holds for 0 < q < 1).
class unsupported_family : public std::logic_error {
 public:
  explicit unsupported_family(const std::string& what) : std::logic_error(what) {}
};

// ---------------------------------------------------------------------------
// Small dense polynomial in one variable, ascending coefficients.
class Polynomial {
 public:
  Polynomial() : c_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);
  static Polynomial monomial(int degree, double coeff = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }
  double operator()(double x) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial scaled(double s) const;
  // p(1 - x)
  Polynomial reflected() const;
  // int_0^1 p
  double integral_unit_interval() const;
  // int_0^inf p(x) e^{-x} dx  =  sum_k c_k k!
  double integral_exp_weight() const;

 private:
  std::vector<double> c_;
};

// ---------------------------------------------------------------------------
// Provider of the deformed sequence x_1 < x_2 < ... with x_0 = 0.
struct XSequence {
  enum class Kind { Harmonic, SU11, QDeformed, Table };

  Kind kind = Kind::Harmonic;
  double kappa = 1.0;           // SU11: x_n = n (2 kappa + n - 1)
  double q = 0.5;               // QDeformed: x_n = [n]_q
  std::vector<double> values;   // Table: x_1, x_2, ...
  double table_radius_sq = std::numeric_limits<double>::infinity();

  static XSequence harmonic();
  static XSequence su11(double kappa);
  static XSequence q_deformed(double q);
  static XSequence table(std::vector<double> values,
                         double radius_sq = std::numeric_limits<double>::infinity());

  double x(int n) const;                  // x_n, n >= 0
  double log_x_factorial(int n) const;    // log(x_1 x_2 ... x_n)
  double radius_squared() const;          // R^2 = lim x_n (sup for tables)
  int max_index() const;                  // last n with x_n defined
  void validate() const;                  // strictly increasing, x_1 > 0
};

// ---------------------------------------------------------------------------
// Family descriptors.

struct GlauberSudarshan {};

struct HolomorphicHermite {
  double s;  // 0 < s < 1
};

struct DisplacedNumber {
  int s;  // displaced |s>, s >= 0
};

struct NonlinearDeformed {
  XSequence xs;
};

struct QDeformed {
  double q;  // q > 0
};

struct Spin {
  int n_j;  // n_j = 2j >= 1
};

struct SpinJacobi {
  int n_j;
  int s;  // 0 <= s <= n_j
};

struct SU11Perelomov {
  double kappa;  // kappa >= 1/2 (identity weight requires kappa > 1/2)
  int s = 0;
};

struct BarutGirardello {
  double kappa;  // kappa > 1/2
};

struct SusskindGlogowerModified {};

struct DFBPlane {
  std::vector<Polynomial> a_polys;          // a_1(xi), a_2(xi), ...
  std::optional<XSequence> xs = std::nullopt;  // derived from a_polys if absent
};

struct DFBSpin {
  int n_j;
  std::vector<Polynomial> a_polys;
  std::optional<XSequence> xs = std::nullopt;
};

using FamilySpec =
    std::variant<GlauberSudarshan, HolomorphicHermite, DisplacedNumber, NonlinearDeformed,
                 QDeformed, Spin, SpinJacobi, SU11Perelomov, BarutGirardello,
                 SusskindGlogowerModified, DFBPlane, DFBSpin>;

std::string family_name(const FamilySpec& spec);
void validate(const FamilySpec& spec);

// Domain radius R: |alpha| < R.  1 for SU(1,1) Perelomov, inf otherwise.
double domain_radius(const FamilySpec& spec);

// phi_n(alpha) = alpha^n h_n(u) with a plain radial profile.  False for the
// holomorphic Hermite family and the displaced families at s > 0, whose
// coefficients carry e^{i(n-s) arg alpha} phases instead.
bool is_an_class(const FamilySpec& spec);

// |phi_n(alpha)| depends only on u = |alpha|^2 (every family except the
// holomorphic Hermite one).
bool is_radially_symmetric(const FamilySpec& spec);

// n_j for the finite-dimensional families, nullopt otherwise.
std::optional<int> finite_dimension(const FamilySpec& spec);

// ---------------------------------------------------------------------------
// Core operations.

// Normalized truncated expansion.  Throws std::domain_error when alpha is
// outside the family domain and truncation_error when the certified tail
// bound cannot be brought under cutoff.tail_tol.
FockVector coefficients(const FamilySpec& spec, complexd alpha, const FockCutoff& cutoff);

// h_n(u) for the AN families; throws unsupported_family otherwise.
double an_profile(const FamilySpec& spec, int n, double u);

// Same profile as {sign, log |h_n|}: the overflow-safe form the quantization
// integrals assemble their integrands from.  sign is 0 (with log -inf) where
// the profile vanishes identically.
struct SignedLogProfile {
  double sign = 0.0;
  double log_magnitude = -std::numeric_limits<double>::infinity();
};
SignedLogProfile an_profile_log(const FamilySpec& spec, int n, double u);

// |phi_n|^2 as a function of u, for every radially symmetric family.  This
// is the detection probability P_n(u) = u^n h_n(u)^2 in the AN case,
// evaluated in a cancellation-free form.
double detection_density(const FamilySpec& spec, int n, double u);

// Radial weight w(u) of the resolution of the identity, normalized so that
// the measure over the plane is w(|alpha|^2) d^2alpha / pi.  Throws
// unsupported_family where the moment problem has no implemented solution
// (generic nonlinear sequences, q > 1).
double identity_weight(const FamilySpec& spec, double u);
bool has_identity_weight(const FamilySpec& spec);

// Closed-form mean photon number, where the family has one.
std::optional<double> nbar_closed(const FamilySpec& spec, double u);

// Mean photon number: closed form when available, otherwise the truncated
// numeric mean at the given cutoff.
double nbar(const FamilySpec& spec, complexd alpha, const FockCutoff& cutoff);

// Optical phase-space point  xi_alpha = sqrt(nbar) e^{i arg alpha}.
complexd phase_space_point(const FamilySpec& spec, complexd alpha, const FockCutoff& cutoff);

// Stereographic chart of the sphere, alpha = tan(theta/2) e^{i phi};
// throws std::domain_error at the theta = pi pole.
complexd stereographic(double theta, double phi);

// Picks an n_max adequate for |alpha| (respecting finite dimensions).
FockCutoff auto_cutoff(const FamilySpec& spec, complexd alpha, double tail_tol = 1e-9);

// ---------------------------------------------------------------------------
// Deformed-binomial machinery (DFB).
//
// Generating function F(xi; t) = exp(sum_m a_m(xi) t^m) = sum_n c_n(xi) t^n,
// q_n = x_n! c_n, f_n = int_0^inf q_n e^{-xi} dxi,
// b_{m,n} = int_0^1 q_m(xi) q_n(1-xi) dxi.
class DfbModel {
 public:
  // xs == nullptr derives x_n! from the symmetric sums a_m(xi) + a_m(1-xi),
  // which must be constant in xi for the distribution to normalize.
  DfbModel(std::vector<Polynomial> a_polys, const XSequence* xs);

  const Polynomial& q(int n) const;
  const Polynomial& c(int n) const;  // q_n / x_n!
  double f(int n) const;
  double b(int m, int n) const;
  double x(int n) const;
  double x_factorial(int n) const;

  // N(u) = sum_n q_n(u)/f_n with a certified remainder bound.
  double norm_series(double u, double* tail_bound = nullptr) const;

 private:
  void extend(int n) const;
  double a_sum_at(double u) const;  // A(u) = sum_m a_m(u)

  std::vector<Polynomial> a_;
  std::optional<XSequence> xs_;
  std::vector<double> sym_sums_;  // constants s_m when x is derived
  mutable std::vector<Polynomial> c_;
  mutable std::vector<Polynomial> q_;
  mutable std::vector<double> f_;
  mutable std::vector<double> x_;      // x_1, x_2, ...
  mutable std::vector<double> xfact_;  // x_0! = 1, x_1!, ...
  mutable std::vector<double> gamma_;  // [t^k] exp(sum s_m t^m)
};

// q_n(xi) for the given coefficient polynomials (spec-facing wrapper).
Polynomial dfb_polynomial(const std::vector<Polynomial>& a_polys, const XSequence* xs, int n);

// (p_0^{(n)}, ..., p_n^{(n)}) at xi; throws std::domain_error if any q_k is
// negative somewhere on a [0,1] sample grid.
std::vector<double> dfb_distribution(const std::vector<Polynomial>& a_polys,
                                     const XSequence* xs, int n, double xi);

}  // namespace cohstate::families

#endif  // COHSTATE_FAMILIES_HPP
