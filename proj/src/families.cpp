// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohstate/specfun.hpp"

namespace cohstate::families {

namespace sf = cohstate::specfun;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// Geometric certificate: sum_{n > N} P_n <= first / (1 - r) given the term
// ratios beyond N are bounded by r < 1 and `first` bounds P_{N+1}.
double geometric_tail(double first, double ratio_bound) {
  if (!(ratio_bound < 1.0) || !(first >= 0.0)) return kInf;
  return first / (1.0 - ratio_bound);
}

void require_tail(double tail, const FockCutoff& cutoff, const char* family) {
  if (!(tail <= cutoff.tail_tol)) {
    throw truncation_error(std::string(family) + ": tail bound " + std::to_string(tail) +
                           " exceeds tail_tol at n_max = " + std::to_string(cutoff.n_max));
  }
}

void require_domain(const FamilySpec& spec, complexd alpha) {
  const double r = domain_radius(spec);
  if (!(std::abs(alpha) < r)) {
    throw std::domain_error(family_name(spec) + ": |alpha| = " + std::to_string(std::abs(alpha)) +
                            " outside the open domain of radius " + std::to_string(r));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monomial(int degree, double coeff) {
  std::vector<double> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<double> c(std::max(c_.size(), rhs.c_.size()), 0.0);
  for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (size_t i = 0; i < rhs.c_.size(); ++i) c[i] += rhs.c_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  std::vector<double> c(c_.size() + rhs.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < rhs.c_.size(); ++j) c[i + j] += c_[i] * rhs.c_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(double s) const {
  std::vector<double> c(c_);
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::reflected() const {
  // p(1-x) by binomial expansion of each power
  std::vector<double> c(c_.size(), 0.0);
  for (size_t k = 0; k < c_.size(); ++k) {
    double binom = 1.0;
    for (size_t j = 0; j <= k; ++j) {
      c[j] += c_[k] * binom * ((j % 2 == 0) ? 1.0 : -1.0);
      binom = binom * (k - j) / (j + 1.0);
    }
  }
  return Polynomial(std::move(c));
}

double Polynomial::integral_unit_interval() const {
  double s = 0.0;
  for (size_t k = 0; k < c_.size(); ++k) s += c_[k] / (k + 1.0);
  return s;
}

double Polynomial::integral_exp_weight() const {
  double s = 0.0;
  double kfact = 1.0;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (k > 0) kfact *= static_cast<double>(k);
    s += c_[k] * kfact;
  }
  return s;
}

// ---------------------------------------------------------------------------
// XSequence

XSequence XSequence::harmonic() { return XSequence{}; }

XSequence XSequence::su11(double kappa) {
  XSequence xs;
  xs.kind = Kind::SU11;
  xs.kappa = kappa;
  return xs;
}

XSequence XSequence::q_deformed(double q) {
  XSequence xs;
  xs.kind = Kind::QDeformed;
  xs.q = q;
  return xs;
}

XSequence XSequence::table(std::vector<double> values, double radius_sq) {
  XSequence xs;
  xs.kind = Kind::Table;
  xs.values = std::move(values);
  xs.table_radius_sq = radius_sq;
  return xs;
}

double XSequence::x(int n) const {
  if (n <= 0) return 0.0;
  switch (kind) {
    case Kind::Harmonic:
      return static_cast<double>(n);
    case Kind::SU11:
      return n * (2.0 * kappa + n - 1.0);
    case Kind::QDeformed:
      return sf::q_number(n, q);
    case Kind::Table:
      if (n > static_cast<int>(values.size())) {
        throw std::out_of_range("XSequence: table exhausted at n = " + std::to_string(n));
      }
      return values[n - 1];
  }
  return 0.0;
}

double XSequence::log_x_factorial(int n) const {
  switch (kind) {
    case Kind::Harmonic:
      return sf::log_factorial(n);
    case Kind::SU11:
      return sf::log_factorial(n) + sf::log_gamma(2.0 * kappa + n) - sf::log_gamma(2.0 * kappa);
    case Kind::QDeformed:
      return sf::q_log_factorial(n, q);
    case Kind::Table: {
      double s = 0.0;
      for (int k = 1; k <= n; ++k) s += std::log(x(k));
      return s;
    }
  }
  return 0.0;
}

double XSequence::radius_squared() const {
  return kind == Kind::Table ? table_radius_sq : kInf;
}

int XSequence::max_index() const {
  return kind == Kind::Table ? static_cast<int>(values.size())
                             : std::numeric_limits<int>::max();
}

void XSequence::validate() const {
  if (kind == Kind::QDeformed && q <= 0.0) {
    throw std::invalid_argument("XSequence: q must be > 0");
  }
  if (kind == Kind::SU11 && kappa <= 0.5) {
    throw std::invalid_argument("XSequence: kappa must be > 1/2");
  }
  if (kind == Kind::Table) {
    double prev = 0.0;
    for (double v : values) {
      if (!(v > prev)) throw std::invalid_argument("XSequence: table must be strictly increasing");
      prev = v;
    }
    if (values.empty()) throw std::invalid_argument("XSequence: empty table");
  }
}

// ---------------------------------------------------------------------------
// Family metadata

std::string family_name(const FamilySpec& spec) {
  struct Visitor {
    std::string operator()(const GlauberSudarshan&) const { return "glauber"; }
    std::string operator()(const HolomorphicHermite&) const { return "holomorphic_hermite"; }
    std::string operator()(const DisplacedNumber&) const { return "displaced_number"; }
    std::string operator()(const NonlinearDeformed&) const { return "nonlinear"; }
    std::string operator()(const QDeformed&) const { return "qdeformed"; }
    std::string operator()(const Spin&) const { return "spin"; }
    std::string operator()(const SpinJacobi&) const { return "spin_jacobi"; }
    std::string operator()(const SU11Perelomov&) const { return "su11"; }
    std::string operator()(const BarutGirardello&) const { return "barut_girardello"; }
    std::string operator()(const SusskindGlogowerModified&) const { return "sgm"; }
    std::string operator()(const DFBPlane&) const { return "dfb_plane"; }
    std::string operator()(const DFBSpin&) const { return "dfb_spin"; }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const FamilySpec& spec) {
  struct Visitor {
    void operator()(const GlauberSudarshan&) const {}
    void operator()(const HolomorphicHermite& f) const {
      if (!(f.s > 0.0 && f.s < 1.0))
        throw std::invalid_argument("holomorphic_hermite: s must lie in (0,1)");
    }
    void operator()(const DisplacedNumber& f) const {
      if (f.s < 0) throw std::invalid_argument("displaced_number: s must be >= 0");
    }
    void operator()(const NonlinearDeformed& f) const { f.xs.validate(); }
    void operator()(const QDeformed& f) const {
      if (!(f.q > 0.0)) throw std::invalid_argument("qdeformed: q must be > 0");
    }
    void operator()(const Spin& f) const {
      if (f.n_j < 1) throw std::invalid_argument("spin: n_j must be >= 1");
    }
    void operator()(const SpinJacobi& f) const {
      if (f.n_j < 1) throw std::invalid_argument("spin_jacobi: n_j must be >= 1");
      if (f.s < 0 || f.s > f.n_j)
        throw std::invalid_argument("spin_jacobi: s must lie in [0, n_j]");
    }
    void operator()(const SU11Perelomov& f) const {
      if (!(f.kappa >= 0.5)) throw std::invalid_argument("su11: kappa must be >= 1/2");
      if (f.s < 0) throw std::invalid_argument("su11: s must be >= 0");
    }
    void operator()(const BarutGirardello& f) const {
      if (!(f.kappa > 0.5)) throw std::invalid_argument("barut_girardello: kappa must be > 1/2");
    }
    void operator()(const SusskindGlogowerModified&) const {}
    void operator()(const DFBPlane& f) const {
      if (f.a_polys.empty()) throw std::invalid_argument("dfb_plane: a_polys must not be empty");
      for (const auto& p : f.a_polys)
        for (double c : p.coeffs())
          if (c < 0.0) throw std::invalid_argument("dfb_plane: a_m coefficients must be >= 0");
      if (f.xs) f.xs->validate();
    }
    void operator()(const DFBSpin& f) const {
      if (f.n_j < 1) throw std::invalid_argument("dfb_spin: n_j must be >= 1");
      if (f.a_polys.empty()) throw std::invalid_argument("dfb_spin: a_polys must not be empty");
      for (const auto& p : f.a_polys)
        for (double c : p.coeffs())
          if (c < 0.0) throw std::invalid_argument("dfb_spin: a_m coefficients must be >= 0");
      if (f.xs) f.xs->validate();
    }
  };
  std::visit(Visitor{}, spec);
}

double domain_radius(const FamilySpec& spec) {
  if (std::holds_alternative<SU11Perelomov>(spec)) return 1.0;
  if (const auto* nl = std::get_if<NonlinearDeformed>(&spec)) {
    return std::sqrt(nl->xs.radius_squared());
  }
  return kInf;
}

bool is_an_class(const FamilySpec& spec) {
  if (std::holds_alternative<HolomorphicHermite>(spec)) return false;
  if (const auto* dn = std::get_if<DisplacedNumber>(&spec)) return dn->s == 0;
  if (const auto* su = std::get_if<SU11Perelomov>(&spec)) return su->s == 0;
  return true;
}

bool is_radially_symmetric(const FamilySpec& spec) {
  return !std::holds_alternative<HolomorphicHermite>(spec);
}

std::optional<int> finite_dimension(const FamilySpec& spec) {
  if (const auto* sp = std::get_if<Spin>(&spec)) return sp->n_j;
  if (const auto* sj = std::get_if<SpinJacobi>(&spec)) return sj->n_j;
  if (const auto* ds = std::get_if<DFBSpin>(&spec)) return ds->n_j;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Shared kernels

namespace {

// log N(u), N(u) = sum u^n / x_n!, by streaming log-sum-exp; safe for any u
// where the series converges (the plain sum overflows near u ~ 1e5 for the
// Bessel-type sequences).
double nonlinear_log_norm(const XSequence& xs, double u) {
  if (u <= 0.0) return 0.0;
  const double lu = std::log(u);
  double log_term = 0.0;
  double shift = 0.0;  // running max of log terms
  double acc = 1.0;    // sum of exp(log_term - shift)
  const int top = std::min(200000, xs.max_index());
  for (int n = 1; n <= top; ++n) {
    const double xn = xs.x(n);
    log_term += lu - std::log(xn);
    if (log_term > shift) {
      acc = acc * std::exp(shift - log_term) + 1.0;
      shift = log_term;
    } else {
      const double t = std::exp(log_term - shift);
      acc += t;
      if (t < 1e-17 * acc && xn > u) return shift + std::log(acc);
    }
  }
  if (top < 200000) {
    // finite table: demand the dropped terms are negligible
    if (!(std::exp(log_term - shift) < 1e-14 * acc)) {
      throw truncation_error("XSequence table too short to evaluate N(u) at u = " +
                             std::to_string(u));
    }
  }
  return shift + std::log(acc);
}

// N(u) = sum u^n / x_n!  for a deformed factorial sequence.
double nonlinear_norm(const XSequence& xs, double u) {
  return std::exp(nonlinear_log_norm(xs, u));
}

// u N'(u)/N(u) for the same sequence.
double nonlinear_log_derivative_mean(const XSequence& xs, double u) {
  double term = 1.0;
  double sum = 1.0;
  double weighted = 0.0;
  const int top = std::min(200000, xs.max_index());
  for (int n = 1; n <= top; ++n) {
    const double xn = xs.x(n);
    term *= u / xn;
    sum += term;
    weighted += n * term;
    if (n * term < 1e-17 * std::max(weighted, sum) && xn > u) break;
  }
  return weighted / sum;
}

// Susskind-Glogower norm N(u) = (1/u) sum_{m>=1} m J_m(2 sqrt(u))^2, N(0)=1.
double sgm_norm(double u) {
  if (u == 0.0) return 1.0;
  const double z = 2.0 * std::sqrt(u);
  const int m_max = static_cast<int>(z) + 36 + static_cast<int>(4.0 * std::sqrt(z));
  double s = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const double jm = sf::bessel_j(m, z);
    s += m * jm * jm;
  }
  return s / u;
}

// Jacobi-spin profile h_{n;s}(u) (real, can be negative).  The overall sign
// is fixed so that the alpha -> 0 limit along the positive real axis gives
// +|s>, which also makes the SU(2) displacement orbit match with the global
// phase e^{-i s arg alpha} only.
double spin_jacobi_h(int n_j, int s, int n, double u) {
  if (n < 0 || n > n_j) return 0.0;
  const double log_pref = 0.5 * (sf::log_factorial(n) + sf::log_factorial(n_j - n) -
                                 sf::log_factorial(s) - sf::log_factorial(n_j - s)) -
                          0.5 * n_j * std::log1p(u);
  double sum = 0.0;
  const int r_lo = std::max(0, n + s - n_j);
  const int r_hi = std::min(n, s);
  for (int r = r_lo; r <= r_hi; ++r) {
    double term = std::exp(sf::log_binomial(s, r) + sf::log_binomial(n_j - s, n - r) +
                           (0.5 * s - r) * std::log(u));
    if (r % 2 == 1) term = -term;
    sum += term;
  }
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_pref) * sum;
}

// Magnitude-and-phase form of the SU(1,1) matrix element U^kappa_{ns}.
complexd su11_phi(double kappa, int s, int n, complexd alpha) {
  const double u = std::norm(alpha);
  const int n_hi = std::max(n, s);
  const int n_lo = std::min(n, s);
  const double log_amp = 0.5 * (sf::log_factorial(n_lo) + sf::log_gamma(2.0 * kappa + n_hi) -
                                sf::log_factorial(n_hi) - sf::log_gamma(2.0 * kappa + n_lo)) +
                         kappa * std::log1p(-u);
  const double pj = sf::jacobi(n_lo, static_cast<double>(n_hi - n_lo), 2.0 * kappa - 1.0,
                               1.0 - 2.0 * u);
  complexd phase_pow(1.0, 0.0);
  if (n >= s) {
    for (int k = 0; k < n - s; ++k) phase_pow *= alpha;
  } else {
    for (int k = 0; k < s - n; ++k) phase_pow *= std::conj(alpha);
    if ((s - n) % 2 == 1) phase_pow = -phase_pow;
  }
  return std::exp(log_amp) * pj * phase_pow;
}

// Displacement-operator matrix element D_{ns}(alpha) (Laguerre form).
complexd displaced_number_phi(int s, int n, complexd alpha) {
  const double u = std::norm(alpha);
  const int n_hi = std::max(n, s);
  const int n_lo = std::min(n, s);
  const double log_amp =
      0.5 * (sf::log_factorial(n_lo) - sf::log_factorial(n_hi)) - 0.5 * u;
  const double lag = sf::laguerre(n_lo, static_cast<double>(n_hi - n_lo), u);
  complexd phase_pow(1.0, 0.0);
  if (n >= s) {
    for (int k = 0; k < n - s; ++k) phase_pow *= alpha;
  } else {
    for (int k = 0; k < s - n; ++k) phase_pow *= -std::conj(alpha);
  }
  return std::exp(log_amp) * lag * phase_pow;
}

struct DfbScratch {
  DfbModel model;
  explicit DfbScratch(const std::vector<Polynomial>& a, const std::optional<XSequence>& xs)
      : model(a, xs ? &*xs : nullptr) {}
};

}  // namespace

// ---------------------------------------------------------------------------
// DfbModel

DfbModel::DfbModel(std::vector<Polynomial> a_polys, const XSequence* xs) : a_(std::move(a_polys)) {
  if (a_.empty()) throw std::invalid_argument("DfbModel: need at least a_1");
  c_.push_back(Polynomial({1.0}));  // c_0 = 1
  q_.push_back(Polynomial({1.0}));
  f_.push_back(1.0);
  xfact_.push_back(1.0);
  if (xs != nullptr) {
    xs->validate();
    xs_ = *xs;
  } else {
    // Derive 1/x_n! from the generating function exp(sum_m s_m t^m) with
    // s_m = a_m(xi) + a_m(1-xi), which must be constant in xi.
    std::vector<double> s_const;
    for (const auto& am : a_) {
      const Polynomial sym = am + am.reflected();
      const auto& sc = sym.coeffs();
      double scale = 0.0;
      for (double v : sc) scale = std::max(scale, std::abs(v));
      for (size_t k = 1; k < sc.size(); ++k) {
        if (std::abs(sc[k]) > 1e-12 * std::max(1.0, scale)) {
          throw std::invalid_argument(
              "DfbModel: a_m(xi) + a_m(1-xi) is not constant; the deformed "
              "binomial distribution would not normalize");
        }
      }
      s_const.push_back(sc[0]);
    }
    sym_sums_ = std::move(s_const);
  }
}

void DfbModel::extend(int n) const {
  const int m_count = static_cast<int>(a_.size());
  while (static_cast<int>(c_.size()) <= n) {
    const int k = static_cast<int>(c_.size());
    // c_k = (1/k) sum_{m=1}^{min(k,M)} m a_m c_{k-m}
    Polynomial ck;
    for (int m = 1; m <= std::min(k, m_count); ++m) {
      ck = ck + (a_[m - 1] * c_[k - m]).scaled(static_cast<double>(m));
    }
    ck = ck.scaled(1.0 / k);
    c_.push_back(ck);

    double xk;
    if (xs_) {
      xk = xs_->x(k);
    } else {
      // gamma_k = [t^k] exp(sum s_m t^m); x_k = gamma_{k-1}/gamma_k
      if (gamma_.empty()) gamma_.push_back(1.0);
      while (static_cast<int>(gamma_.size()) <= k) {
        const int j = static_cast<int>(gamma_.size());
        double g = 0.0;
        for (int m = 1; m <= std::min<int>(j, sym_sums_.size()); ++m) {
          g += m * sym_sums_[m - 1] * gamma_[j - m];
        }
        gamma_.push_back(g / j);
      }
      if (!(gamma_[k] > 0.0)) {
        throw std::invalid_argument("DfbModel: derived x_n! is not positive");
      }
      xk = gamma_[k - 1] / gamma_[k];
    }
    x_.push_back(xk);
    xfact_.push_back(xfact_.back() * xk);
    q_.push_back(ck.scaled(xfact_.back()));
    f_.push_back(q_.back().integral_exp_weight());
  }
}

const Polynomial& DfbModel::q(int n) const {
  extend(n);
  return q_[n];
}

const Polynomial& DfbModel::c(int n) const {
  extend(n);
  return c_[n];
}

double DfbModel::f(int n) const {
  extend(n);
  return f_[n];
}

double DfbModel::b(int m, int n) const {
  extend(std::max(m, n));
  return (q_[m] * q_[n].reflected()).integral_unit_interval();
}

double DfbModel::x(int n) const {
  if (n == 0) return 0.0;
  extend(n);
  return x_[n - 1];
}

double DfbModel::x_factorial(int n) const {
  extend(n);
  return xfact_[n];
}

double DfbModel::a_sum_at(double u) const {
  double s = 0.0;
  for (const auto& am : a_) s += am(u);
  return s;
}

double DfbModel::norm_series(double u, double* tail_bound) const {
  // q_n/f_n <= c_n because f_n >= x_n!; the c_n themselves sum to exp(A(u)),
  // so the remainder beyond N is bounded by exp(A(u)) - sum_{n<=N} c_n(u).
  const double total_c = std::exp(a_sum_at(u));
  double sum = 0.0;
  double csum = 0.0;
  for (int n = 0; n < 2000; ++n) {
    extend(n);
    const double cn = c_[n](u);
    csum += cn;
    sum += q_[n](u) / f_[n];
    if (n > 4 && n > u + 8.0 && cn < 1e-18 * std::max(csum, 1.0)) {
      if (tail_bound != nullptr) *tail_bound = std::max(0.0, total_c - csum);
      return sum;
    }
  }
  throw truncation_error("DfbModel::norm_series did not converge by n = 2000");
}

Polynomial dfb_polynomial(const std::vector<Polynomial>& a_polys, const XSequence* xs, int n) {
  DfbModel model(a_polys, xs);
  return model.q(n);
}

std::vector<double> dfb_distribution(const std::vector<Polynomial>& a_polys, const XSequence* xs,
                                     int n, double xi) {
  if (xi < 0.0 || xi > 1.0) throw std::domain_error("dfb_distribution: xi must lie in [0,1]");
  DfbModel model(a_polys, xs);
  // Negativity scan of the q_k on a [0,1] grid; nonnegative coefficients make
  // this vacuous, but table-driven deformations can violate it.
  for (int k = 0; k <= n; ++k) {
    for (int g = 0; g <= 32; ++g) {
      const double t = g / 32.0;
      if (model.q(k)(t) < -1e-12) {
        throw std::domain_error("dfb_distribution: q_" + std::to_string(k) +
                                " is negative on [0,1]");
      }
    }
  }
  // p_k = x_n! c_k(xi) c_{n-k}(1-xi), the cancellation-free form of
  // x_n!/(x_k! x_{n-k}!) q_k(xi) q_{n-k}(1-xi).
  std::vector<double> p(n + 1, 0.0);
  const double xf = model.x_factorial(n);
  for (int k = 0; k <= n; ++k) {
    p[k] = xf * model.c(k)(xi) * model.c(n - k)(1.0 - xi);
  }
  return p;
}

// ---------------------------------------------------------------------------
// coefficients()

namespace {

FockVector glauber_like_coefficients(complexd alpha, const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  complexd c = std::exp(complexd(-0.5 * u, 0.0));
  for (int n = 0; n < dim; ++n) {
    v.coeffs[n] = c;
    c *= alpha / std::sqrt(n + 1.0);
  }
  if (u > 0.0) {
    const int nmax = cutoff.n_max;
    const double log_first = -u + (nmax + 1) * std::log(u) - sf::log_factorial(nmax + 1);
    v.tail_mass = geometric_tail(std::exp(log_first), u / (nmax + 2.0));
  }
  require_tail(v.tail_mass, cutoff, "glauber");
  return v;
}

FockVector nonlinear_coefficients(const XSequence& xs, complexd alpha, const FockCutoff& cutoff,
                                  const char* name) {
  const double u = std::norm(alpha);
  if (!(u < xs.radius_squared())) {
    throw std::domain_error(std::string(name) + ": |alpha|^2 outside convergence radius");
  }
  if (xs.max_index() < cutoff.n_max + 2) {
    throw truncation_error(std::string(name) +
                           ": x table too short for n_max (need n_max + 2 entries)");
  }
  const double norm = nonlinear_norm(xs, u);
  const int dim = cutoff.dim();
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  complexd c = complexd(1.0 / std::sqrt(norm), 0.0);
  for (int n = 0; n < dim; ++n) {
    v.coeffs[n] = c;
    c *= alpha / std::sqrt(xs.x(n + 1));
  }
  if (u > 0.0) {
    const int nmax = cutoff.n_max;
    const double log_first =
        (nmax + 1) * std::log(u) - xs.log_x_factorial(nmax + 1) - std::log(norm);
    v.tail_mass = geometric_tail(std::exp(log_first), u / xs.x(nmax + 2));
  }
  require_tail(v.tail_mass, cutoff, name);
  return v;
}

FockVector spin_coefficients(int n_j, complexd alpha, const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  const int top = std::min(cutoff.n_max, n_j);
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  complexd pow_alpha(1.0, 0.0);
  for (int n = 0; n <= top; ++n) {
    const double log_mag = 0.5 * sf::log_binomial(n_j, n) - 0.5 * n_j * std::log1p(u);
    v.coeffs[n] = std::exp(log_mag) * pow_alpha;
    pow_alpha *= alpha;
  }
  if (top < n_j && u > 0.0) {
    const double log_first =
        sf::log_binomial(n_j, top + 1) + (top + 1) * std::log(u) - n_j * std::log1p(u);
    const double r = u * (n_j - top - 1) / (top + 2.0);
    v.tail_mass = geometric_tail(std::exp(log_first), r);
    require_tail(v.tail_mass, cutoff, "spin");
  }
  return v;
}

FockVector spin_jacobi_coefficients(const SpinJacobi& f, complexd alpha,
                                    const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  if (u == 0.0) {
    if (f.s > cutoff.n_max) {
      throw truncation_error("spin_jacobi: n_max below the occupied level s");
    }
    v.coeffs[f.s] = 1.0;
    return v;
  }
  const int top = std::min(cutoff.n_max, f.n_j);
  complexd pow_alpha(1.0, 0.0);
  for (int n = 0; n <= top; ++n) {
    v.coeffs[n] = pow_alpha * spin_jacobi_h(f.n_j, f.s, n, u);
    pow_alpha *= alpha;
  }
  // finite family: account for any rows beyond n_max exactly
  double lost = 0.0;
  for (int n = top + 1; n <= f.n_j; ++n) {
    const double h = spin_jacobi_h(f.n_j, f.s, n, u);
    lost += std::pow(u, n) * h * h;
  }
  v.tail_mass = lost;
  require_tail(v.tail_mass, cutoff, "spin_jacobi");
  return v;
}

FockVector su11_coefficients(const SU11Perelomov& f, complexd alpha, const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  for (int n = 0; n < dim; ++n) v.coeffs[n] = su11_phi(f.kappa, f.s, n, alpha);
  if (u > 0.0) {
    const int nmax = cutoff.n_max;
    // |phi_n|^2 <= [s! G(2k+n) / (n! G(2k+s))] C(n,s)^2 (1-u)^{2k} u^{n-s};
    // the bound's term ratio decreases in n for kappa >= 1/2.
    auto log_bound = [&](int n) {
      return sf::log_factorial(f.s) + sf::log_gamma(2.0 * f.kappa + n) - sf::log_factorial(n) -
             sf::log_gamma(2.0 * f.kappa + f.s) + 2.0 * sf::log_binomial(n, f.s) +
             2.0 * f.kappa * std::log1p(-u) + (n - f.s) * std::log(u);
    };
    auto ratio = [&](int n) {
      const double t = (n + 1.0) / (n + 1.0 - f.s);
      return u * (2.0 * f.kappa + n) / (n + 1.0) * t * t;
    };
    v.tail_mass = geometric_tail(std::exp(log_bound(nmax + 1)), ratio(nmax + 1));
  }
  require_tail(v.tail_mass, cutoff, "su11");
  return v;
}

FockVector displaced_number_coefficients(const DisplacedNumber& f, complexd alpha,
                                         const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  if (f.s > cutoff.n_max) {
    throw truncation_error("displaced_number: n_max below the displaced level s");
  }
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  for (int n = 0; n < dim; ++n) v.coeffs[n] = displaced_number_phi(f.s, n, alpha);
  if (u > 0.0) {
    const int nmax = cutoff.n_max;
    // |phi_n|^2 <= C(n,s) u^{n-s} e^{-u} e^u / (n-s)!  via the Laguerre bound
    // |L_s^{(a)}(u)| <= C(s+a,s) e^{u/2}.
    auto log_bound = [&](int n) {
      return sf::log_binomial(n, f.s) + (n - f.s) * std::log(u) - sf::log_factorial(n - f.s);
    };
    auto ratio = [&](int n) {
      return u * (n + 1.0) / ((n + 1.0 - f.s) * (n + 1.0 - f.s));
    };
    v.tail_mass = geometric_tail(std::exp(log_bound(nmax + 1)), ratio(nmax + 1));
  }
  require_tail(v.tail_mass, cutoff, "displaced_number");
  return v;
}

FockVector sgm_coefficients(complexd alpha, const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  if (u == 0.0) {
    v.coeffs[0] = 1.0;
    return v;
  }
  const double norm = sgm_norm(u);
  const double z = 2.0 * std::sqrt(u);
  complexd phase(1.0, 0.0);  // e^{i n arg alpha}
  const complexd unit = alpha / std::abs(alpha);
  for (int n = 0; n < dim; ++n) {
    // alpha^n h_n(u) = e^{i n theta} sqrt(n+1) J_{n+1}(z) / (sqrt(u) sqrt(N))
    const double mag = std::sqrt((n + 1.0) / norm) * sf::bessel_j(n + 1, z) / std::sqrt(u);
    v.coeffs[n] = mag * phase;
    phase *= unit;
  }
  {
    const int nmax = cutoff.n_max;
    // |J_{n+1}(z)| <= u^{(n+1)/2}/(n+1)! gives the bound (n+1) u^n/((n+1)!)^2/N
    const double log_first = std::log(nmax + 2.0) + (nmax + 1) * std::log(u) -
                             2.0 * sf::log_factorial(nmax + 2) - std::log(norm);
    const double r = u / ((nmax + 2.0) * (nmax + 3.0));
    v.tail_mass = geometric_tail(std::exp(log_first), r);
  }
  require_tail(v.tail_mass, cutoff, "sgm");
  return v;
}

FockVector holomorphic_hermite_coefficients(const HolomorphicHermite& f, complexd alpha,
                                            const FockCutoff& cutoff) {
  const double s = f.s;
  const double X = alpha.real();
  const double Y = alpha.imag();
  const int dim = cutoff.dim();

  const double log_ns = std::log((1.0 / s - s) / (2.0 * kPi)) + (-s * X * X + Y * Y / s);
  // prefactor e^{-alpha^2/2} / sqrt(N_s): magnitude and phase kept separate
  const double pref_mag = std::exp(-0.5 * (X * X - Y * Y) - 0.5 * log_ns);
  const complexd pref = pref_mag * std::exp(complexd(0.0, -X * Y));

  // G_n = H_n(alpha)/sqrt(b_n); b_{n+1}/b_n = beta (n+1), beta = 2(1+s)/(1-s)
  const double beta = 2.0 * (1.0 + s) / (1.0 - s);
  const double b0 = kPi * std::sqrt(s) / (1.0 - s);

  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  complexd g_prev(0.0, 0.0);
  complexd g = complexd(1.0 / std::sqrt(b0), 0.0);
  double g_maj_prev = 0.0;
  double g_maj = std::abs(g);
  const double abs_a = std::abs(alpha);
  for (int n = 0; n < dim; ++n) {
    v.coeffs[n] = pref * g;
    const double rb_next = std::sqrt(beta * (n + 1.0));
    const double rb_cur = n > 0 ? std::sqrt(beta * n) : 1.0;
    const complexd g_next = (2.0 * alpha * g - (2.0 * n / rb_cur) * g_prev) / rb_next;
    const double m_next = (2.0 * abs_a * g_maj + (2.0 * n / rb_cur) * g_maj_prev) / rb_next;
    g_prev = g;
    g = g_next;
    g_maj_prev = g_maj;
    g_maj = m_next;
  }
  // Ratio certificate from the majorant: continue a few steps past n_max and
  // take the worst recent squared ratio (it decreases toward (1-s)/(1+s)).
  {
    double t_first = pref_mag * pref_mag * g_maj * g_maj;
    double worst_ratio = 0.0;
    double mm_prev = g_maj_prev, mm = g_maj;
    for (int n = dim; n < dim + 8; ++n) {
      const double rb_next = std::sqrt(beta * (n + 1.0));
      const double rb_cur = std::sqrt(beta * n);
      const double m_next = (2.0 * abs_a * mm + (2.0 * n / rb_cur) * mm_prev) / rb_next;
      if (n >= dim + 4) worst_ratio = std::max(worst_ratio, (m_next * m_next) / (mm * mm));
      mm_prev = mm;
      mm = m_next;
    }
    v.tail_mass = geometric_tail(t_first, worst_ratio);
  }
  require_tail(v.tail_mass, cutoff, "holomorphic_hermite");
  return v;
}

FockVector dfb_plane_coefficients(const DFBPlane& f, complexd alpha, const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  DfbScratch scratch(f.a_polys, f.xs);
  const auto& model = scratch.model;
  double series_tail = 0.0;
  const double norm = model.norm_series(u, &series_tail);

  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  complexd phase(1.0, 0.0);
  const complexd unit = u > 0.0 ? alpha / std::abs(alpha) : complexd(1.0, 0.0);
  double head = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double pn = model.q(n)(u) / (model.f(n) * norm);
    head += pn;
    v.coeffs[n] = std::sqrt(std::max(0.0, pn)) * phase;
    phase *= unit;
  }
  // P_n <= c_n(u)/N(u); the c-series remainder bounds the lost mass.
  double csum = 0.0;
  for (int n = 0; n < dim; ++n) csum += model.c(n)(u);
  const double c_total = std::exp([&] {
    double sum = 0.0;
    for (const auto& am : f.a_polys) sum += am(u);
    return sum;
  }());
  v.tail_mass = std::max(0.0, c_total - csum) / norm;
  require_tail(v.tail_mass, cutoff, "dfb_plane");
  return v;
}

FockVector dfb_spin_coefficients(const DFBSpin& f, complexd alpha, const FockCutoff& cutoff) {
  const double u = std::norm(alpha);
  const int dim = cutoff.dim();
  DfbScratch scratch(f.a_polys, f.xs);
  const auto& model = scratch.model;
  const double xi1 = 1.0 / (1.0 + u);
  const double xi2 = u / (1.0 + u);
  const int top = std::min(cutoff.n_max, f.n_j);

  double norm = 0.0;
  std::vector<double> pn(f.n_j + 1, 0.0);
  for (int n = 0; n <= f.n_j; ++n) {
    pn[n] = model.q(n)(xi1) * model.q(f.n_j - n)(xi2) / model.b(n, f.n_j - n);
    norm += pn[n];
  }

  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  complexd phase(1.0, 0.0);
  const complexd unit = u > 0.0 ? alpha / std::abs(alpha) : complexd(1.0, 0.0);
  for (int n = 0; n <= top; ++n) {
    v.coeffs[n] = std::sqrt(std::max(0.0, pn[n] / norm)) * phase;
    phase *= unit;
  }
  double lost = 0.0;
  for (int n = top + 1; n <= f.n_j; ++n) lost += pn[n] / norm;
  v.tail_mass = lost;
  require_tail(v.tail_mass, cutoff, "dfb_spin");
  return v;
}

}  // namespace

FockVector coefficients(const FamilySpec& spec, complexd alpha, const FockCutoff& cutoff) {
  validate(spec);
  require_domain(spec, alpha);
  struct Visitor {
    complexd alpha;
    const FockCutoff& cutoff;
    FockVector operator()(const GlauberSudarshan&) const {
      return glauber_like_coefficients(alpha, cutoff);
    }
    FockVector operator()(const HolomorphicHermite& f) const {
      return holomorphic_hermite_coefficients(f, alpha, cutoff);
    }
    FockVector operator()(const DisplacedNumber& f) const {
      if (f.s == 0) return glauber_like_coefficients(alpha, cutoff);
      return displaced_number_coefficients(f, alpha, cutoff);
    }
    FockVector operator()(const NonlinearDeformed& f) const {
      return nonlinear_coefficients(f.xs, alpha, cutoff, "nonlinear");
    }
    FockVector operator()(const QDeformed& f) const {
      return nonlinear_coefficients(XSequence::q_deformed(f.q), alpha, cutoff, "qdeformed");
    }
    FockVector operator()(const Spin& f) const {
      return spin_coefficients(f.n_j, alpha, cutoff);
    }
    FockVector operator()(const SpinJacobi& f) const {
      return spin_jacobi_coefficients(f, alpha, cutoff);
    }
    FockVector operator()(const SU11Perelomov& f) const {
      if (f.s == 0) {
        // AN closed form, cheaper and phase-exact
        const double u = std::norm(alpha);
        const int dim = cutoff.dim();
        FockVector v;
        v.coeffs.assign(dim, complexd(0.0, 0.0));
        complexd c = std::pow(1.0 - u, f.kappa);
        for (int n = 0; n < dim; ++n) {
          v.coeffs[n] = c;
          c *= alpha * std::sqrt((2.0 * f.kappa + n) / (n + 1.0));
        }
        if (u > 0.0) {
          const int nmax = cutoff.n_max;
          const double log_first = sf::log_gamma(2.0 * f.kappa + nmax + 1) -
                                   sf::log_factorial(nmax + 1) - sf::log_gamma(2.0 * f.kappa) +
                                   (nmax + 1) * std::log(u) + 2.0 * f.kappa * std::log1p(-u);
          const double r = u * (2.0 * f.kappa + nmax + 1) / (nmax + 2.0);
          v.tail_mass = geometric_tail(std::exp(log_first), r);
        }
        require_tail(v.tail_mass, cutoff, "su11");
        return v;
      }
      return su11_coefficients(f, alpha, cutoff);
    }
    FockVector operator()(const BarutGirardello& f) const {
      return nonlinear_coefficients(XSequence::su11(f.kappa), alpha, cutoff, "barut_girardello");
    }
    FockVector operator()(const SusskindGlogowerModified&) const {
      return sgm_coefficients(alpha, cutoff);
    }
    FockVector operator()(const DFBPlane& f) const {
      return dfb_plane_coefficients(f, alpha, cutoff);
    }
    FockVector operator()(const DFBSpin& f) const {
      return dfb_spin_coefficients(f, alpha, cutoff);
    }
  };
  return std::visit(Visitor{alpha, cutoff}, spec);
}

// ---------------------------------------------------------------------------
// an_profile / detection_density

namespace {

SignedLogProfile signed_log(double sign, double log_mag) {
  SignedLogProfile p;
  if (sign == 0.0) return p;
  p.sign = sign > 0.0 ? 1.0 : -1.0;
  p.log_magnitude = log_mag;
  return p;
}

SignedLogProfile signed_log_of(double value) {
  if (value == 0.0) return {};
  return signed_log(value > 0.0 ? 1.0 : -1.0, std::log(std::abs(value)));
}

}  // namespace

SignedLogProfile an_profile_log(const FamilySpec& spec, int n, double u) {
  if (n < 0) throw std::domain_error("an_profile: n must be >= 0");
  if (!is_an_class(spec)) {
    throw unsupported_family("an_profile: " + family_name(spec) + " is not in the AN class");
  }
  struct Visitor {
    int n;
    double u;
    SignedLogProfile operator()(const GlauberSudarshan&) const {
      return signed_log(1.0, -0.5 * u - 0.5 * sf::log_factorial(n));
    }
    SignedLogProfile operator()(const HolomorphicHermite&) const { return {}; }  // unreachable
    SignedLogProfile operator()(const DisplacedNumber&) const {
      return signed_log(1.0, -0.5 * u - 0.5 * sf::log_factorial(n));  // s == 0
    }
    SignedLogProfile operator()(const NonlinearDeformed& f) const {
      return signed_log(1.0, -0.5 * f.xs.log_x_factorial(n) -
                                 0.5 * nonlinear_log_norm(f.xs, u));
    }
    SignedLogProfile operator()(const QDeformed& f) const {
      const XSequence xs = XSequence::q_deformed(f.q);
      return signed_log(1.0, -0.5 * xs.log_x_factorial(n) - 0.5 * nonlinear_log_norm(xs, u));
    }
    SignedLogProfile operator()(const Spin& f) const {
      if (n > f.n_j) return {};
      return signed_log(1.0, 0.5 * sf::log_binomial(f.n_j, n) - 0.5 * f.n_j * std::log1p(u));
    }
    SignedLogProfile operator()(const SpinJacobi& f) const {
      return signed_log_of(spin_jacobi_h(f.n_j, f.s, n, u));
    }
    SignedLogProfile operator()(const SU11Perelomov& f) const {
      return signed_log(1.0, 0.5 * (sf::log_gamma(2.0 * f.kappa + n) - sf::log_factorial(n) -
                                    sf::log_gamma(2.0 * f.kappa)) +
                                 f.kappa * std::log1p(-u));
    }
    SignedLogProfile operator()(const BarutGirardello& f) const {
      const XSequence xs = XSequence::su11(f.kappa);
      return signed_log(1.0, -0.5 * xs.log_x_factorial(n) - 0.5 * nonlinear_log_norm(xs, u));
    }
    SignedLogProfile operator()(const SusskindGlogowerModified&) const {
      if (u == 0.0) {
        return signed_log(1.0, 0.5 * std::log(n + 1.0) - sf::log_factorial(n + 1));
      }
      const double j = sf::bessel_j(n + 1, 2.0 * std::sqrt(u));
      if (j == 0.0) return {};
      return signed_log(j > 0.0 ? 1.0 : -1.0,
                        0.5 * (std::log(n + 1.0) - std::log(sgm_norm(u))) -
                            0.5 * (n + 1) * std::log(u) + std::log(std::abs(j)));
    }
    SignedLogProfile operator()(const DFBPlane& f) const {
      DfbScratch scratch(f.a_polys, f.xs);
      const double norm = scratch.model.norm_series(u);
      const double qn = std::max(0.0, scratch.model.q(n)(u));
      if (qn == 0.0) return {};
      return signed_log(1.0, 0.5 * (std::log(qn) - std::log(scratch.model.f(n)) -
                                    std::log(norm)) -
                                 0.5 * n * std::log(u));
    }
    SignedLogProfile operator()(const DFBSpin& f) const {
      if (n > f.n_j) return {};
      DfbScratch scratch(f.a_polys, f.xs);
      const auto& model = scratch.model;
      const double xi1 = 1.0 / (1.0 + u);
      const double xi2 = u / (1.0 + u);
      double norm = 0.0;
      for (int k = 0; k <= f.n_j; ++k) {
        norm += model.q(k)(xi1) * model.q(f.n_j - k)(xi2) / model.b(k, f.n_j - k);
      }
      const double num =
          std::max(0.0, model.q(n)(xi1) * model.q(f.n_j - n)(xi2) / model.b(n, f.n_j - n));
      if (num == 0.0) return {};
      return signed_log(1.0, 0.5 * (std::log(num) - std::log(norm)) - 0.5 * n * std::log(u));
    }
  };
  return std::visit(Visitor{n, u}, spec);
}

double an_profile(const FamilySpec& spec, int n, double u) {
  const SignedLogProfile p = an_profile_log(spec, n, u);
  return p.sign * std::exp(p.log_magnitude);
}

double detection_density(const FamilySpec& spec, int n, double u) {
  if (!is_radially_symmetric(spec)) {
    throw unsupported_family("detection_density: " + family_name(spec) +
                             " is not rotation invariant");
  }
  if (n < 0) return 0.0;
  struct Visitor {
    int n;
    double u;
    double operator()(const GlauberSudarshan&) const {
      return std::exp(-u + n * std::log(u) - sf::log_factorial(n));
    }
    double operator()(const HolomorphicHermite&) const { return 0.0; }  // unreachable
    double operator()(const DisplacedNumber& f) const {
      return std::norm(displaced_number_phi(f.s, n, std::sqrt(u)));
    }
    double operator()(const NonlinearDeformed& f) const {
      return std::exp(n * std::log(u) - f.xs.log_x_factorial(n) -
                      nonlinear_log_norm(f.xs, u));
    }
    double operator()(const QDeformed& f) const {
      const XSequence xs = XSequence::q_deformed(f.q);
      return std::exp(n * std::log(u) - xs.log_x_factorial(n) - nonlinear_log_norm(xs, u));
    }
    double operator()(const Spin& f) const {
      if (n > f.n_j) return 0.0;
      return std::exp(sf::log_binomial(f.n_j, n) + n * std::log(u) - f.n_j * std::log1p(u));
    }
    double operator()(const SpinJacobi& f) const {
      const double h = spin_jacobi_h(f.n_j, f.s, n, u);
      return std::pow(u, n) * h * h;
    }
    double operator()(const SU11Perelomov& f) const {
      return std::norm(su11_phi(f.kappa, f.s, n, std::sqrt(u)));
    }
    double operator()(const BarutGirardello& f) const {
      const XSequence xs = XSequence::su11(f.kappa);
      return std::exp(n * std::log(u) - xs.log_x_factorial(n) - nonlinear_log_norm(xs, u));
    }
    double operator()(const SusskindGlogowerModified&) const {
      if (u == 0.0) return n == 0 ? 1.0 : 0.0;
      const double j = sf::bessel_j(n + 1, 2.0 * std::sqrt(u));
      return (n + 1.0) * j * j / (u * sgm_norm(u));
    }
    double operator()(const DFBPlane& f) const {
      DfbScratch scratch(f.a_polys, f.xs);
      const double norm = scratch.model.norm_series(u);
      return std::max(0.0, scratch.model.q(n)(u) / (scratch.model.f(n) * norm));
    }
    double operator()(const DFBSpin& f) const {
      if (n > f.n_j) return 0.0;
      DfbScratch scratch(f.a_polys, f.xs);
      const auto& model = scratch.model;
      const double xi1 = 1.0 / (1.0 + u);
      const double xi2 = u / (1.0 + u);
      double norm = 0.0;
      for (int k = 0; k <= f.n_j; ++k) {
        norm += model.q(k)(xi1) * model.q(f.n_j - k)(xi2) / model.b(k, f.n_j - k);
      }
      return std::max(0.0, model.q(n)(xi1) * model.q(f.n_j - n)(xi2) /
                               (model.b(n, f.n_j - n) * norm));
    }
  };
  if (u == 0.0 && !std::holds_alternative<SusskindGlogowerModified>(spec) &&
      !std::holds_alternative<DFBPlane>(spec) && !std::holds_alternative<DFBSpin>(spec) &&
      !std::holds_alternative<DisplacedNumber>(spec) &&
      !std::holds_alternative<SU11Perelomov>(spec) &&
      !std::holds_alternative<SpinJacobi>(spec)) {
    return n == 0 ? 1.0 : 0.0;
  }
  return std::visit(Visitor{n, u}, spec);
}

// ---------------------------------------------------------------------------
// identity_weight

namespace {

// Log-normal smoothing kernel of the q-deformed weight.
double q_lognormal(double v, double q) {
  if (v <= 0.0) return 0.0;
  const double al = std::abs(std::log(q));
  const double t = std::log(v / std::sqrt(q));
  return std::exp(-t * t / (2.0 * al)) / std::sqrt(2.0 * kPi * al);
}

double q_weight(double q, double t) {
  // Radial weight solving the symmetric q-moment problem,
  //   w_q(t) = e_q(t) (1/q - q) sum_j g_q(t (1/q - q)/q^{2j}) E_q(-q^{2j}/(1/q - q)).
  // The j-sum alone is the full measure density: its n-th moments are
  // [n]_q! exactly, since int g_q(v) v^n dv = q^{-n(n+1)/2} and
  // E_q(-q^{2j}/(1/q - q)) = (q^2;q^2)_inf/(q^2;q^2)_j supplies the Euler
  // factor.  The e_q(t) prefactor then cancels the 1/e_q inside h_n^2.
  if (t <= 0.0) return 0.0;
  const double c = 1.0 / q - q;
  // peak of the j-th term sits near t c / q^{2j} = sqrt(q)
  const double j_peak = std::max(0.0, std::log(std::sqrt(q) / (t * c)) / (2.0 * std::log(q)));
  const int j_hi = static_cast<int>(j_peak) + 40;
  // E_q(-q^{2j}/c) = prod_{k > j} (1 - q^{2k}), the cancellation-free form of
  // the alternating series (which loses digits as q -> 1)
  std::vector<double> euler(j_hi + 1);
  {
    double full = 1.0;
    for (int k = j_hi + 1; k < j_hi + 2000; ++k) {
      const double f = 1.0 - std::pow(q, 2.0 * k);
      if (f >= 1.0 - 1e-18) break;
      full *= f;
    }
    euler[j_hi] = full;
    for (int j = j_hi; j > 0; --j) {
      euler[j - 1] = euler[j] * (1.0 - std::pow(q, 2.0 * j));
    }
  }
  double sum = 0.0;
  for (int j = 0; j <= j_hi; ++j) {
    const double scale = std::pow(q, 2.0 * j);
    const double term = q_lognormal(t * c / scale, q) * euler[j];
    sum += term;
    if (j > j_peak + 6 && term < 1e-18 * sum) break;
  }
  if (!(sum > 0.0)) return 0.0;
  // log-space assembly: e_q grows like exp(log^2) while the log-normal sum
  // decays twice as fast, so the product underflows rather than overflows
  const double log_w =
      nonlinear_log_norm(XSequence::q_deformed(q), t) + std::log(c) + std::log(sum);
  return std::exp(log_w);
}

double bg_weight(double kappa, double u) {
  // w_BG(u) = N_BG(u) (2/Gamma(2k)) u^{k-1/2} K_{2k-1}(2 sqrt u); assembled
  // in log space because N_BG grows like exp(2 sqrt u) while K decays the
  // same way, leaving an algebraic weight.
  if (u <= 0.0) return 0.0;
  const double k = sf::bessel_k(2.0 * kappa - 1.0, 2.0 * std::sqrt(u));
  if (k <= 0.0) return 0.0;  // K underflowed; the weighted integrands have too
  const double log_w = nonlinear_log_norm(XSequence::su11(kappa), u) + std::log(2.0) -
                       sf::log_gamma(2.0 * kappa) + (kappa - 0.5) * std::log(u) + std::log(k);
  return std::exp(log_w);
}

}  // namespace

bool has_identity_weight(const FamilySpec& spec) {
  if (const auto* qd = std::get_if<QDeformed>(&spec)) return qd->q <= 1.0;
  if (const auto* su = std::get_if<SU11Perelomov>(&spec)) return su->kappa > 0.5;
  if (const auto* nl = std::get_if<NonlinearDeformed>(&spec)) {
    switch (nl->xs.kind) {
      case XSequence::Kind::Harmonic:
      case XSequence::Kind::SU11:
        return true;
      case XSequence::Kind::QDeformed:
        return nl->xs.q <= 1.0;
      case XSequence::Kind::Table:
        return false;
    }
  }
  return true;
}

double identity_weight(const FamilySpec& spec, double u) {
  struct Visitor {
    double u;
    double operator()(const GlauberSudarshan&) const { return 1.0; }
    double operator()(const HolomorphicHermite& f) const {
      // constant plane weight (1/s - s)/(2 pi), reported in the same
      // w = pi * weight normalization as the radial families
      return 0.5 * (1.0 / f.s - f.s);
    }
    double operator()(const DisplacedNumber&) const { return 1.0; }
    double operator()(const NonlinearDeformed& f) const {
      switch (f.xs.kind) {
        case XSequence::Kind::Harmonic:
          return 1.0;
        case XSequence::Kind::SU11:
          return bg_weight(f.xs.kappa, u);
        case XSequence::Kind::QDeformed:
          if (f.xs.q > 1.0)
            throw unsupported_family("identity weight unsupported for q > 1");
          if (f.xs.q == 1.0) return 1.0;
          return q_weight(f.xs.q, u);
        case XSequence::Kind::Table:
          throw unsupported_family(
              "identity weight unavailable for a table-driven nonlinear family");
      }
      return 0.0;
    }
    double operator()(const QDeformed& f) const {
      if (f.q > 1.0) throw unsupported_family("identity weight unsupported for q > 1");
      if (f.q == 1.0) return 1.0;
      return q_weight(f.q, u);
    }
    double operator()(const Spin& f) const {
      return (f.n_j + 1.0) / ((1.0 + u) * (1.0 + u));
    }
    double operator()(const SpinJacobi& f) const {
      return (f.n_j + 1.0) / ((1.0 + u) * (1.0 + u));
    }
    double operator()(const SU11Perelomov& f) const {
      if (!(f.kappa > 0.5)) {
        throw unsupported_family("su11: identity weight requires kappa > 1/2");
      }
      return (2.0 * f.kappa - 1.0) / ((1.0 - u) * (1.0 - u));
    }
    double operator()(const BarutGirardello& f) const { return bg_weight(f.kappa, u); }
    double operator()(const SusskindGlogowerModified&) const { return sgm_norm(u); }
    double operator()(const DFBPlane& f) const {
      DfbScratch scratch(f.a_polys, f.xs);
      return std::exp(-u) * scratch.model.norm_series(u);
    }
    double operator()(const DFBSpin& f) const {
      DfbScratch scratch(f.a_polys, f.xs);
      const auto& model = scratch.model;
      const double xi1 = 1.0 / (1.0 + u);
      const double xi2 = u / (1.0 + u);
      double norm = 0.0;
      for (int k = 0; k <= f.n_j; ++k) {
        norm += model.q(k)(xi1) * model.q(f.n_j - k)(xi2) / model.b(k, f.n_j - k);
      }
      return norm / ((1.0 + u) * (1.0 + u));
    }
  };
  return std::visit(Visitor{u}, spec);
}

// ---------------------------------------------------------------------------
// means and phase space

std::optional<double> nbar_closed(const FamilySpec& spec, double u) {
  if (std::holds_alternative<GlauberSudarshan>(spec)) return u;
  if (const auto* dn = std::get_if<DisplacedNumber>(&spec)) {
    if (dn->s == 0) return u;
    return std::nullopt;
  }
  if (const auto* sp = std::get_if<Spin>(&spec)) return sp->n_j * u / (1.0 + u);
  if (const auto* su = std::get_if<SU11Perelomov>(&spec)) {
    if (su->s == 0) return 2.0 * su->kappa * u / (1.0 - u);
    return std::nullopt;
  }
  if (const auto* nl = std::get_if<NonlinearDeformed>(&spec)) {
    return nonlinear_log_derivative_mean(nl->xs, u);
  }
  if (const auto* qd = std::get_if<QDeformed>(&spec)) {
    return nonlinear_log_derivative_mean(XSequence::q_deformed(qd->q), u);
  }
  if (const auto* bg = std::get_if<BarutGirardello>(&spec)) {
    return nonlinear_log_derivative_mean(XSequence::su11(bg->kappa), u);
  }
  return std::nullopt;
}

double nbar(const FamilySpec& spec, complexd alpha, const FockCutoff& cutoff) {
  const auto closed = nbar_closed(spec, std::norm(alpha));
  if (closed) return *closed;
  const FockVector v = coefficients(spec, alpha, cutoff);
  double mean = 0.0;
  for (int n = 0; n < v.dim(); ++n) mean += n * std::norm(v.coeffs[n]);
  return mean;
}

complexd phase_space_point(const FamilySpec& spec, complexd alpha, const FockCutoff& cutoff) {
  require_domain(spec, alpha);
  if (alpha == complexd(0.0, 0.0)) return {0.0, 0.0};
  const double mean = nbar(spec, alpha, cutoff);
  return std::sqrt(std::max(0.0, mean)) * alpha / std::abs(alpha);
}

complexd stereographic(double theta, double phi) {
  if (theta < 0.0 || theta > kPi) {
    throw std::domain_error("stereographic: theta must lie in [0, pi]");
  }
  if (theta >= kPi - 1e-15) {
    throw std::domain_error("stereographic: theta = pi maps to the point at infinity");
  }
  return std::tan(0.5 * theta) * std::exp(complexd(0.0, phi));
}

FockCutoff auto_cutoff(const FamilySpec& spec, complexd alpha, double tail_tol) {
  const double u = std::norm(alpha);
  int n_max = 63;
  if (const auto fd = finite_dimension(spec)) {
    return FockCutoff{*fd, tail_tol};
  }
  if (const auto* su = std::get_if<SU11Perelomov>(&spec)) {
    double n = 80.0 + 2.0 * su->kappa + 2.0 * su->s;
    if (u > 0.0 && u < 1.0) n = std::max(n, 80.0 - 46.0 / std::log(u) + 4.0 * su->s);
    n_max = static_cast<int>(std::min(n, 4000.0));
  } else if (const auto* hh = std::get_if<HolomorphicHermite>(&spec)) {
    const double t = (1.0 - hh->s) / (1.0 + hh->s);
    n_max = static_cast<int>(96 + 16.0 * u / std::max(0.05, 1.0 - t));
  } else if (std::holds_alternative<QDeformed>(spec) ||
             std::holds_alternative<NonlinearDeformed>(spec) ||
             std::holds_alternative<BarutGirardello>(spec)) {
    // walk the sequence until the geometric decay past x_n > u certifies 1e-16
    XSequence xs = XSequence::harmonic();
    if (const auto* qd = std::get_if<QDeformed>(&spec)) xs = XSequence::q_deformed(qd->q);
    if (const auto* bg = std::get_if<BarutGirardello>(&spec)) xs = XSequence::su11(bg->kappa);
    if (const auto* nl = std::get_if<NonlinearDeformed>(&spec)) xs = nl->xs;
    double decay = 0.0;
    int n = 1;
    const int top = std::min(8190, xs.max_index() - 2);
    for (; n < top; ++n) {
      const double xn = xs.x(n);
      if (xn > u) decay += std::log(u / xn);
      if (decay < -40.0) break;
    }
    n_max = std::min(n + 8, top);
  } else {
    int s_extra = 0;
    if (const auto* dn = std::get_if<DisplacedNumber>(&spec)) s_extra = 2 * dn->s;
    n_max = static_cast<int>(u + 14.0 * std::sqrt(u + 1.0) + 40.0) + s_extra;
  }
  return FockCutoff{std::max(n_max, 16), tail_tol};
}

}  // namespace cohstate::families
