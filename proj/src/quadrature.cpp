// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>

#include "cohstate/specfun.hpp"

namespace cohstate::quadrature {

namespace sf = cohstate::specfun;
using families::XSequence;

namespace {

constexpr double kPi = 3.14159265358979323846;

// G7/K15 nodes and weights (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& rhs) const { return error < rhs.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, long* evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double x = h * kXgk[jtw];
    const double fsum = f(c - x) + f(c + x);
    resg += kWg[j] * fsum;
    resk += kWgk[jtw] * fsum;
  }
  for (int j = 0; j < 4; ++j) {
    const int jtw = 2 * j;
    const double x = h * kXgk[jtw];
    resk += kWgk[jtw] * (f(c - x) + f(c + x));
  }
  *evals += 15;
  return Panel{a, b, resk * h, std::abs(resk - resg) * std::abs(h)};
}

IntegralResult integrate_with_breakpoints(const std::function<double(double)>& f,
                                          const std::vector<double>& edges,
                                          const QuadratureSpec& qspec) {
  IntegralResult out;

  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_err = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] == edges[i + 1]) continue;
    Panel p = gk15(f, edges[i], edges[i + 1], &out.evaluations);
    total += p.value;
    total_err += p.error;
    panels.push(p);
  }

  int count = static_cast<int>(edges.size()) - 1;
  while (total_err > std::max(qspec.abs_tol, qspec.rel_tol * std::abs(total))) {
    if (count >= qspec.max_subdivisions) {
      throw convergence_error("integrate: subdivision budget exhausted (error " +
                              std::to_string(total_err) + ")");
    }
    if (panels.empty()) break;  // every panel at machine resolution
    Panel worst = panels.top();
    panels.pop();
    total -= worst.value;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) {
      // interval at machine resolution; accept its estimate
      total += worst.value;
      total_err += 0.0;
      continue;
    }
    Panel left = gk15(f, worst.a, mid, &out.evaluations);
    Panel right = gk15(f, mid, worst.b, &out.evaluations);
    total += left.value + right.value;
    total_err += left.error + right.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  out.value = total;
  out.error_estimate = total_err;
  return out;
}

}  // namespace

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& qspec) {
  if (a == b) return {};
  // seed with several panels so multiscale integrands localize quickly
  std::vector<double> edges;
  const int seed_panels = 16;
  for (int i = 0; i <= seed_panels; ++i) edges.push_back(a + (b - a) * i / seed_panels);
  return integrate_with_breakpoints(f, edges, qspec);
}

namespace {

// v-edges for the unit interval with geometric refinement toward v = 1,
// where both semi-infinite maps compress the tail.
std::vector<double> map_edges() {
  std::vector<double> edges;
  for (int i = 0; i <= 8; ++i) edges.push_back(i / 16.0);
  double gap = 0.5;
  for (int k = 0; k < 44; ++k) {
    gap *= 0.5;
    edges.push_back(1.0 - gap);
  }
  edges.push_back(1.0);
  return edges;
}

// u = -scale log(1-v) pushes [0, inf) to [0, 1).
IntegralResult integrate_exp_map(const std::function<double(double)>& f, double scale,
                                 const QuadratureSpec& qspec) {
  auto g = [&f, scale](double v) {
    if (v >= 1.0) return 0.0;  // rounding at the far edge; integrand decayed
    const double u = -scale * std::log1p(-v);
    return f(u) * scale / (1.0 - v);
  };
  return integrate_with_breakpoints(g, map_edges(), qspec);
}

// u = scale v/(1-v)
IntegralResult integrate_rational_map(const std::function<double(double)>& f, double scale,
                                      const QuadratureSpec& qspec) {
  auto g = [&f, scale](double v) {
    const double om = 1.0 - v;
    if (om <= 0.0) return 0.0;
    return f(scale * v / om) * scale / (om * om);
  };
  return integrate_with_breakpoints(g, map_edges(), qspec);
}

// The maps resolve an integrand only if its mass sits at u = O(scale); when
// the caller has no hint we place the scale at the log-spaced peak of |f| u.
double probe_scale(const std::function<double(double)>& f) {
  double best_u = 1.0;
  double best = -1.0;
  for (int k = -4; k <= 14; ++k) {
    const double u = std::ldexp(1.0, k);
    const double m = std::abs(f(u)) * u;
    if (std::isfinite(m) && m > best) {
      best = m;
      best_u = u;
    }
  }
  return std::max(1.0, best_u);
}

}  // namespace

IntegralResult radial_integral(const std::function<double(double)>& f, double r_squared,
                               const QuadratureSpec& qspec) {
  if (std::isfinite(r_squared)) {
    return integrate(f, 0.0, r_squared, qspec);
  }
  const double scale = probe_scale(f);
  return qspec.map == SemiInfiniteMap::ExpMap ? integrate_exp_map(f, scale, qspec)
                                              : integrate_rational_map(f, scale, qspec);
}

// ---------------------------------------------------------------------------
// Bessel hump scheme

IntegralResult bessel_squared_over_t(int nu, const QuadratureSpec& qspec) {
  // Integrate J_nu(2t)^2/t between consecutive zeros of J_nu(2t); the
  // partial sums at doubling checkpoints carry a smooth 1/z series which a
  // Neville table extrapolates to z = inf.  McMahon zeros are accurate
  // enough: panel edges only need to track the oscillation.
  IntegralResult out;
  auto integrand = [nu, &out](double t) {
    const double j = sf::bessel_j(nu, 2.0 * t);
    ++out.evaluations;  // count J evaluations rather than GK points
    return j * j / t;
  };
  auto zero = [nu](int k) {
    // k-th positive zero of J_nu(2t): j_{nu,k}/2, McMahon expansion
    const double beta = (k + 0.5 * nu - 0.25) * kPi;
    const double mu = 4.0 * nu * nu;
    const double z = beta - (mu - 1.0) / (8.0 * beta) -
                     4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(8.0 * beta, 3));
    return 0.5 * z;
  };

  QuadratureSpec local = qspec;
  local.rel_tol = std::min(qspec.rel_tol, 1e-12);
  local.abs_tol = 1e-16;
  local.max_subdivisions = 64;

  const int checkpoints = 5;
  const int base_humps = 8 + 2 * nu;  // start past the turning-point region
  std::vector<double> xs;  // 1/z at each checkpoint
  std::vector<double> ys;  // partial sums
  long evals = 0;

  double acc = 0.0;
  int k = 0;  // humps consumed
  double lo = 1e-280;  // J_nu(2t)^2/t ~ t^{2nu-1} integrable at 0
  for (int c = 0, target = base_humps; c < checkpoints; ++c, target *= 2) {
    while (k < target) {
      const double hi = zero(k + 1);
      IntegralResult part = integrate(integrand, lo, hi, local);
      acc += part.value;
      lo = hi;
      ++k;
    }
    xs.push_back(1.0 / lo);
    ys.push_back(acc);
  }
  out.evaluations = evals + out.evaluations;

  // Neville extrapolation to x = 0
  std::vector<double> tab = ys;
  double correction = 0.0;
  for (int level = 1; level < checkpoints; ++level) {
    for (int i = 0; i < checkpoints - level; ++i) {
      tab[i] = tab[i + 1] + (tab[i + 1] - tab[i]) * xs[i + level] / (xs[i] - xs[i + level]);
    }
    correction = std::abs(tab[0] - ys[0]);
  }
  out.value = tab[0];
  out.error_estimate = std::abs(correction) * 1e-4 + 1e-12;
  return out;
}

// ---------------------------------------------------------------------------
// Gauss-Hermite nodes (weight e^{-x^2}), Newton refinement.

void gauss_hermite(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  constexpr double kPim4 = 0.7511255444649425;  // pi^{-1/4}
  constexpr double kEps = 1e-14;
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  const int half = (m + 1) / 2;
  double z = 0.0;
  double pp = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes[1];
    } else {
      z = 2.0 * z - nodes[i - 2];
    }
    for (int it = 0; it < 100; ++it) {
      double p1 = kPim4;
      double p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps) break;
    }
    nodes[i] = z;
    nodes[m - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[m - 1 - i] = weights[i];
  }
}

// ---------------------------------------------------------------------------
// Moment and Gram verification

namespace {

// Families whose radial integrals transform best in t = sqrt(u) with an
// exponential tail (Bessel-K weights).
bool is_bessel_k_weighted(const FamilySpec& spec) {
  if (std::holds_alternative<families::BarutGirardello>(spec)) return true;
  if (const auto* nl = std::get_if<families::NonlinearDeformed>(&spec)) {
    return nl->xs.kind == XSequence::Kind::SU11;
  }
  return false;
}

bool is_heavy_tailed(const FamilySpec& spec) {
  if (std::holds_alternative<families::Spin>(spec)) return true;
  if (std::holds_alternative<families::SpinJacobi>(spec)) return true;
  if (std::holds_alternative<families::DFBSpin>(spec)) return true;
  if (const auto* qd = std::get_if<families::QDeformed>(&spec)) return qd->q < 1.0;
  if (const auto* nl = std::get_if<families::NonlinearDeformed>(&spec)) {
    return nl->xs.kind == XSequence::Kind::QDeformed && nl->xs.q < 1.0;
  }
  return false;
}

}  // namespace

IntegralResult family_radial_integral(const FamilySpec& spec,
                                      const std::function<double(double)>& f,
                                      double scale_hint, const QuadratureSpec& qspec) {
  if (std::holds_alternative<families::SU11Perelomov>(spec)) {
    // finite interval with a square-root softening at u = 1 so that the
    // (1-u)^{2 kappa - 2} endpoint behavior is polynomial in v
    auto g = [&f](double v) {
      const double om = 1.0 - v;
      return f(1.0 - om * om) * 2.0 * om;
    };
    return integrate(g, 0.0, 1.0, qspec);
  }
  const double radius = families::domain_radius(spec);
  if (std::isfinite(radius)) {
    return integrate(f, 0.0, radius * radius, qspec);
  }
  if (is_bessel_k_weighted(spec)) {
    auto g = [&f](double t) { return 2.0 * t * f(t * t); };
    return integrate_exp_map(g, std::max(1.0, 0.5 * scale_hint), qspec);
  }
  if (is_heavy_tailed(spec)) {
    return integrate_rational_map(f, std::max(1.0, scale_hint), qspec);
  }
  return integrate_exp_map(f, std::max(1.0, scale_hint), qspec);
}

namespace {

// Diagonal Gram entry int w(u) |phi_n|^2(u) du for a radially symmetric
// family, with the change of variables picked per weight class.
IntegralResult diagonal_entry(const FamilySpec& spec, int n, const QuadratureSpec& qspec) {
  if (std::holds_alternative<families::SusskindGlogowerModified>(spec)) {
    // w = N(u) cancels the norm inside P_n: the entry reduces to
    // 2 (n+1) int_0^inf J_{n+1}(2t)^2 / t dt.
    IntegralResult r = bessel_squared_over_t(n + 1, qspec);
    r.value *= 2.0 * (n + 1.0);
    r.error_estimate *= 2.0 * (n + 1.0);
    return r;
  }
  if (const auto* dp = std::get_if<families::DFBPlane>(&spec)) {
    // w P_n = e^{-u} N(u) c_n(u)/(fc_n N(u)): the norm cancels, leaving a
    // plain exponential-weight polynomial integral
    families::DfbModel model(dp->a_polys, dp->xs ? &*dp->xs : nullptr);
    const families::Polynomial cn = model.c(n);
    const double fc = cn.integral_exp_weight();
    auto f = [cn, fc](double u) { return std::exp(-u) * cn(u) / fc; };
    return integrate_exp_map(f, 1.0 + n, qspec);
  }
  if (const auto* ds = std::get_if<families::DFBSpin>(&spec)) {
    families::DfbModel model(ds->a_polys, ds->xs ? &*ds->xs : nullptr);
    const families::Polynomial cn = model.c(n);
    const families::Polynomial cm = model.c(ds->n_j - n);
    const double bc = (cn * cm.reflected()).integral_unit_interval();
    auto f = [cn, cm, bc](double u) {
      const double xi1 = 1.0 / (1.0 + u);
      const double xi2 = u / (1.0 + u);
      return cn(xi1) * cm(xi2) / (bc * (1.0 + u) * (1.0 + u));
    };
    return integrate_rational_map(f, 1.0 + n, qspec);
  }
  auto integrand = [&spec, n](double u) {
    if (u <= 0.0) return 0.0;
    return families::identity_weight(spec, u) * families::detection_density(spec, n, u);
  };
  return family_radial_integral(spec, integrand, 1.0 + n, qspec);
}

GramResult gram_holomorphic_hermite(const families::HolomorphicHermite& fam, int n_upper,
                                    const QuadratureSpec& qspec) {
  (void)qspec;  // the tensor rule below is exact for the polynomial degree
  const double s = fam.s;
  const int m = 2 * (n_upper + 6);
  std::vector<double> x, w;
  gauss_hermite(m, x, w);

  const double sx = 1.0 / std::sqrt(1.0 - s);
  const double sy = 1.0 / std::sqrt(1.0 / s - 1.0);
  const double beta = 2.0 * (1.0 + s) / (1.0 - s);
  const double b0 = kPi * std::sqrt(s) / (1.0 - s);

  const int count = n_upper + 1;
  std::vector<std::vector<std::complex<double>>> acc(
      count, std::vector<std::complex<double>>(count, {0.0, 0.0}));

  std::vector<std::complex<double>> g(count);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::complex<double> z(sx * x[i], sy * x[j]);
      // H_n(z)/sqrt(b_n) via the normalized recurrence
      std::complex<double> gp(0.0, 0.0);
      std::complex<double> gc(1.0 / std::sqrt(b0), 0.0);
      for (int n = 0; n < count; ++n) {
        g[n] = gc;
        const double rb_next = std::sqrt(beta * (n + 1.0));
        const double rb_cur = n > 0 ? std::sqrt(beta * n) : 1.0;
        const std::complex<double> gn = (2.0 * z * gc - (2.0 * n / rb_cur) * gp) / rb_next;
        gp = gc;
        gc = gn;
      }
      const double ww = w[i] * w[j];
      for (int a = 0; a < count; ++a) {
        for (int b = a; b < count; ++b) {
          acc[a][b] += ww * std::conj(g[a]) * g[b];
        }
      }
    }
  }

  const double scale = sx * sy;
  GramResult out;
  out.gram.assign(count, std::vector<double>(count, 0.0));
  double residual = 0.0;
  for (int a = 0; a < count; ++a) {
    for (int b = a; b < count; ++b) {
      const double val = (acc[a][b] * scale).real();
      out.gram[a][b] = val;
      out.gram[b][a] = val;
      const double target = (a == b) ? 1.0 : 0.0;
      residual = std::max(residual, std::abs(val - target));
    }
  }
  out.report.target = "gram(holomorphic_hermite, N=" + std::to_string(n_upper) + ")";
  out.report.residual = residual;
  out.report.threshold = kPassThreshold;
  out.report.passed = residual <= kPassThreshold;
  out.report.evaluations = static_cast<long>(m) * m;
  return out;
}

}  // namespace

VerificationReport verify_moment_problem(const FamilySpec& spec, int n,
                                         const QuadratureSpec& qspec) {
  if (!families::is_radially_symmetric(spec)) {
    throw families::unsupported_family(
        "verify_moment_problem: no radial reduction for " + families::family_name(spec) +
        "; use gram_identity");
  }
  if (!families::has_identity_weight(spec)) {
    // surface the family-specific reason
    families::identity_weight(spec, 0.5);
  }
  const auto fd = families::finite_dimension(spec);
  VerificationReport rep;
  rep.target = "moment(" + families::family_name(spec) + ", n=" + std::to_string(n) + ")";
  rep.threshold = kPassThreshold;
  if (fd && n > *fd) {
    // beyond the space dimension the family has no n-th state to resolve
    rep.residual = 0.0;
    rep.passed = true;
    return rep;
  }
  const IntegralResult r = diagonal_entry(spec, n, qspec);
  rep.residual = std::abs(r.value - 1.0);
  rep.evaluations = r.evaluations;
  rep.passed = rep.residual <= rep.threshold;
  return rep;
}

GramResult gram_identity(const FamilySpec& spec, int n_upper, const QuadratureSpec& qspec) {
  if (n_upper < 0) throw std::invalid_argument("gram_identity: N must be >= 0");
  if (const auto* hh = std::get_if<families::HolomorphicHermite>(&spec)) {
    return gram_holomorphic_hermite(*hh, n_upper, qspec);
  }
  if (!families::has_identity_weight(spec)) {
    families::identity_weight(spec, 0.5);  // throws with the reason
  }
  const auto fd = families::finite_dimension(spec);
  const int top = fd ? std::min(n_upper, *fd) : n_upper;

  GramResult out;
  out.gram.assign(top + 1, std::vector<double>(top + 1, 0.0));
  double residual = 0.0;
  long evals = 0;
  for (int n = 0; n <= top; ++n) {
    const IntegralResult r = diagonal_entry(spec, n, qspec);
    out.gram[n][n] = r.value;
    evals += r.evaluations;
    residual = std::max(residual, std::abs(r.value - 1.0));
  }
  out.report.target = "gram(" + families::family_name(spec) + ", N=" + std::to_string(top) + ")";
  out.report.residual = residual;
  out.report.threshold = kPassThreshold;
  out.report.passed = residual <= kPassThreshold;
  out.report.evaluations = evals;
  return out;
}

}  // namespace cohstate::quadrature
