// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cohstate::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Small adaptive Simpson integrator, private to this translation unit.  Only
// bessel_k needs it; the certified quadrature engine lives in the quadrature
// module and depends on the family layer above us.
double simpson(const double a, const double b, const double fa, const double fm,
               const double fb, double (*f)(double, double, double), double nu,
               double x, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm, nu, x);
  const double frm = f(rm, nu, x);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return simpson(a, m, fa, flm, fm, f, nu, x, 0.5 * eps, depth - 1) +
         simpson(m, b, fm, frm, fb, f, nu, x, 0.5 * eps, depth - 1);
}

double bessel_k_integrand(double t, double nu, double x) {
  // exp(-x cosh t) cosh(nu t), evaluated in log form so that large nu*t and
  // large x do not overflow before they cancel.
  const double xc = x * std::cosh(t);
  const double nt = nu * t;
  if (nt < 30.0) {
    return std::exp(-xc) * std::cosh(nt);
  }
  // cosh(nt) ~ exp(nt)/2 beyond double's cancellation range
  const double ex = nt - xc - std::log(2.0);
  return ex < -745.0 ? 0.0 : std::exp(ex);
}

}  // namespace

std::complex<double> hermite(int n, std::complex<double> z) {
  if (n < 0) throw std::domain_error("hermite: order must be >= 0");
  std::complex<double> p0(1.0, 0.0);
  if (n == 0) return p0;
  std::complex<double> p1 = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    const std::complex<double> p2 = 2.0 * z * p1 - 2.0 * static_cast<double>(k) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double hermite(int n, double x) { return hermite(n, std::complex<double>(x, 0.0)).real(); }

double laguerre(int n, double a, double x) {
  if (n < 0) throw std::domain_error("laguerre: order must be >= 0");
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0 + a - x) * p1 - (k + a) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double jacobi_sum(int n, double a, double b, double x) {
  if (n < 0) throw std::domain_error("jacobi: degree must be >= 0");
  // P_n^{(a,b)}(x) = 2^{-n} sum_s C(n+a,s) C(n+b,n-s) (x-1)^{n-s} (x+1)^s
  double sum = 0.0;
  for (int s = 0; s <= n; ++s) {
    double term = binomial(n + a, s) * binomial(n + b, n - s);
    term *= std::pow(x - 1.0, n - s) * std::pow(x + 1.0, s);
    sum += term;
  }
  return std::ldexp(sum, -n);
}

namespace {

bool is_negative_integer(double v, int* out) {
  const double r = std::round(v);
  if (r <= -1.0 && std::abs(v - r) < 1e-12) {
    *out = static_cast<int>(-r);
    return true;
  }
  return false;
}

double jacobi_recurrence(int n, double a, double b, double x) {
  double y0 = 1.0;
  if (n == 0) return y0;
  double y1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (int k = 2; k <= n; ++k) {
    const double denom = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
    const double g1 = (2.0 * k + a + b - 1.0) *
                      ((2.0 * k + a + b) * (2.0 * k + a + b - 2.0) * x + a * a - b * b);
    const double g0 = -2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
    const double y2 = (g1 * y1 + g0 * y0) / denom;
    y0 = y1;
    y1 = y2;
  }
  return y1;
}

}  // namespace

double jacobi(int n, double a, double b, double x) {
  if (n < 0) throw std::domain_error("jacobi: degree must be >= 0");
  if (n == 0) return 1.0;
  int m = 0;
  if (is_negative_integer(a, &m) && m <= n) {
    // P_n^{(-m,b)} = [C(n+b,m)/C(n,m)] ((x-1)/2)^m P_{n-m}^{(m,b)}
    const double factor = binomial(n + b, m) / binomial(static_cast<double>(n), m);
    return factor * std::pow(0.5 * (x - 1.0), m) * jacobi(n - m, static_cast<double>(m), b, x);
  }
  if (is_negative_integer(b, &m) && m <= n) {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    return parity * jacobi(n, b, a, -x);
  }
  // The three-term recurrence degenerates when a+b is a negative integer in
  // [-2n, -2]; the explicit sum has no such restriction.
  const double ab = a + b;
  const double abr = std::round(ab);
  if (std::abs(ab - abr) < 1e-9 && abr <= -2.0 && abr >= -2.0 * n) {
    return jacobi_sum(n, a, b, x);
  }
  return jacobi_recurrence(n, a, b, x);
}

double bessel_j(int n, double x) {
  if (n < 0) throw std::domain_error("bessel_j: order must be >= 0");
  double sign = 1.0;
  if (x < 0.0) {
    x = -x;
    if (n % 2 == 1) sign = -1.0;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0 && x < 1e-8) return 1.0 - 0.25 * x * x;

  // Backward (Miller) recurrence: start well above max(n, x), run
  // j_{k-1} = (2k/x) j_k - j_{k+1}, then normalize with
  // J_0(x) + 2 sum_{k>=1} J_{2k}(x) = 1.
  const double xa = std::max(x, 1.0);
  int start = n + 16 + static_cast<int>(1.5 * std::sqrt(static_cast<double>(n) + 1.0));
  const int from_x =
      static_cast<int>(xa) + 18 + static_cast<int>(12.0 * std::sqrt(xa));
  if (from_x > start) start = from_x;
  if (start % 2 == 1) ++start;

  double jp = 0.0;        // j_{k+1}
  double jc = 1e-30;      // j_k
  double norm = 0.0;      // running J_0 + 2 sum J_{2k}
  double result = (n == start) ? jc : 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm = (2.0 * k / x) * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 == n) result = jc;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jc : 2.0 * jc;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
  }
  return sign * result / norm;
}

double bessel_i(double nu, double x) {
  if (nu < 0.0) throw std::domain_error("bessel_i: order must be >= 0");
  if (x < 0.0) throw std::domain_error("bessel_i: argument must be >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  // term_0 = (x/2)^nu / Gamma(nu+1); ratio (x/2)^2 / (m (nu+m))
  const double log_t0 = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
  if (log_t0 < -745.0) return 0.0;
  double term = std::exp(log_t0);
  double sum = term;
  const double q = 0.25 * x * x;
  for (int m = 1; m < 4000; ++m) {
    term *= q / (m * (nu + m));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double bessel_k(double nu, double x) {
  if (nu < 0.0) nu = -nu;  // K_{-nu} = K_nu
  if (x <= 0.0) throw std::domain_error("bessel_k: argument must be > 0");
  if (x > 1400.0) return 0.0;  // below double underflow, exp(-x) ~ 0
  // Integrate exp(-x cosh t) cosh(nu t) on [0, T] where the integrand is
  // negligible beyond T: x cosh(T) - nu T > 760.
  double t_hi = 2.0;
  while (x * std::cosh(t_hi) - nu * t_hi < 760.0 && t_hi < 60.0) t_hi += 0.5;
  const double f0 = bessel_k_integrand(0.0, nu, x);
  const double fm = bessel_k_integrand(0.5 * t_hi, nu, x);
  const double f1 = bessel_k_integrand(t_hi, nu, x);
  // scale-free tolerance seeded with a crude magnitude estimate
  const double scale = std::max({f0, fm, f1, 1e-300});
  return simpson(0.0, t_hi, f0, fm, f1, &bessel_k_integrand, nu, x,
                 1e-13 * scale * t_hi, 48);
}

double log_gamma(double x) { return std::lgamma(x); }

double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
  return std::lgamma(n + 1.0);
}

double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial: n must be >= 0");
  if (n <= 20) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }
  return std::exp(log_factorial(n));
}

double binomial(double x, int k) {
  if (k < 0) return 0.0;
  double prod = 1.0;
  for (int i = 0; i < k; ++i) prod *= (x - i) / (k - i);
  return prod;
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -kInf;
  if (n <= 20) return std::log(binomial(static_cast<double>(n), k));
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double q_number(int n, double q) {
  if (q <= 0.0) throw std::domain_error("q_number: q must be > 0");
  if (n < 0) throw std::domain_error("q_number: n must be >= 0");
  if (n == 0) return 0.0;
  const double lq = std::log(q);
  if (std::abs(q - 1.0) < 1e-6) {
    // [n]_q = sinh(n log q)/sinh(log q); Taylor in log q near the 0/0 point
    const double l2 = lq * lq;
    const double nn = static_cast<double>(n);
    return nn * (1.0 + (nn * nn - 1.0) * l2 / 6.0 +
                 (nn * nn - 1.0) * (3.0 * nn * nn - 7.0) * l2 * l2 / 360.0);
  }
  return std::sinh(n * lq) / std::sinh(lq);
}

double q_log_factorial(int n, double q) {
  double s = 0.0;
  for (int k = 2; k <= n; ++k) s += std::log(q_number(k, q));
  return s;
}

double q_factorial(int n, double q) { return std::exp(q_log_factorial(n, q)); }

double q_exp_small(double u, double q) {
  if (q <= 0.0) throw std::domain_error("q_exp_small: q must be > 0");
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 100000; ++n) {
    term *= u / q_number(n, q);
    sum += term;
    if (std::abs(term) < 1e-14 * std::max(1.0, std::abs(sum)) && n > 4) break;
  }
  return sum;
}

double q_exp_big(double u, double q) {
  if (q <= 0.0) throw std::domain_error("q_exp_big: q must be > 0");
  if (q > 1.0) {
    const double radius = 1.0 / (q - 1.0 / q);
    if (std::abs(u) >= radius) {
      throw std::domain_error("q_exp_big: |u| outside the convergence disk for q > 1");
    }
  }
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 100000; ++n) {
    term *= std::pow(q, n) * u / q_number(n, q);
    sum += term;
    if (std::abs(term) < 1e-14 * std::max(1.0, std::abs(sum)) && n > 4) break;
  }
  return sum;
}

QDeformation::QDeformation(double q_) : q(q_) {
  if (q <= 0.0) throw std::domain_error("QDeformation: q must be > 0");
}

double QDeformation::big_exponential_radius() const {
  return q <= 1.0 ? kInf : 1.0 / (q - 1.0 / q);
}

}  // namespace cohstate::specfun
