// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/quantize.hpp"

#include <cmath>

namespace cohstate::quantize {

using families::SignedLogProfile;

namespace {

double weight_mod_at(const Quantizer& qz, double u) {
  return qz.weight_mod ? qz.weight_mod(u) : 1.0;
}

// w~(u) g(u) u^{(n+n')/2} h_n(u) h_n'(u), assembled in log form so that the
// u-power and the profile magnitudes cancel before exponentiation.
double band_integrand(const Quantizer& qz, const std::function<double(double)>& g, int n,
                      int np, double u) {
  if (u <= 0.0) return 0.0;
  const SignedLogProfile hn = families::an_profile_log(qz.spec, n, u);
  if (hn.sign == 0.0) return 0.0;
  const SignedLogProfile hnp = families::an_profile_log(qz.spec, np, u);
  if (hnp.sign == 0.0) return 0.0;
  const double w = families::identity_weight(qz.spec, u) * weight_mod_at(qz, u);
  // a non-finite weight can only happen where the profiles have already
  // driven the true integrand to zero (norm factors growing past double range)
  if (w == 0.0 || !std::isfinite(w)) return 0.0;
  const double log_mag =
      0.5 * (n + np) * std::log(u) + hn.log_magnitude + hnp.log_magnitude;
  double gv = 1.0;
  if (g) gv = g(u);
  return w * gv * hn.sign * hnp.sign * std::exp(log_mag);
}

double band_integral(const Quantizer& qz, const std::function<double(double)>& g, int n,
                     int np) {
  auto f = [&](double u) { return band_integrand(qz, g, n, np, u); };
  const double scale = 1.0 + 0.5 * (n + np);
  return quadrature::family_radial_integral(qz.spec, f, scale, qz.qspec).value;
}

}  // namespace

Quantizer make_quantizer(FamilySpec spec, FockCutoff cutoff, quadrature::QuadratureSpec qspec,
                         std::function<double(double)> weight_mod) {
  families::validate(spec);
  if (!families::is_an_class(spec)) {
    throw families::unsupported_family("make_quantizer: " + families::family_name(spec) +
                                       " is not in the AN class");
  }
  if (!families::has_identity_weight(spec)) {
    families::identity_weight(spec, 0.5);  // throws with the family's reason
  }
  Quantizer qz;
  qz.spec = std::move(spec);
  qz.cutoff = cutoff;
  qz.qspec = qspec;
  qz.weight_mod = std::move(weight_mod);
  return qz;
}

FockOperator quantize_symbol(const Quantizer& qz, const SeparableSymbol& sym) {
  const int dim = qz.cutoff.dim();
  FockOperator op(dim);
  const int m = sym.m;
  for (int n = 0; n < dim; ++n) {
    const int np = n + m;  // column index: f carries e^{i m theta}
    if (np < 0 || np >= dim) continue;
    op.at(n, np) = band_integral(qz, sym.g, n, np);
  }
  if (m == 0) op.set_hermitian_flag(true);
  return op;
}

std::vector<double> lowering_entries(const Quantizer& qz, int count) {
  // the quantized alpha: g(u) = sqrt(u), m = 1, so that the u-power under
  // the integral is u^n as in a_{n-1,n} = int w~ u^n h_{n-1} h_n du
  const std::function<double(double)> g = [](double u) { return std::sqrt(u); };
  std::vector<double> a(count, 0.0);
  for (int n = 1; n <= count; ++n) {
    a[n - 1] = band_integral(qz, g, n - 1, n);
  }
  return a;
}

FockOperator lowering_operator(const Quantizer& qz) {
  const int dim = qz.cutoff.dim();
  const std::vector<double> a = lowering_entries(qz, dim - 1);
  FockOperator op(dim);
  for (int n = 1; n < dim; ++n) op.at(n - 1, n) = a[n - 1];
  return op;
}

std::vector<double> commutator_spectrum(const Quantizer& qz) {
  const int count = qz.cutoff.n_max;
  const std::vector<double> a = lowering_entries(qz, count + 1);
  std::vector<double> diag(count, 0.0);
  for (int n = 0; n < count; ++n) {
    const double x_next = a[n] * a[n];                      // X_{n+1}
    const double x_cur = n > 0 ? a[n - 1] * a[n - 1] : 0.0;  // X_n, X_0 = 0
    diag[n] = x_next - x_cur;
  }
  return diag;
}

CommutatorCheck commutator_check(const Quantizer& qz) {
  CommutatorCheck out;
  out.direct = commutator_spectrum(qz);
  const int count = static_cast<int>(out.direct.size());
  out.factored.assign(count, 0.0);
  for (int n = 0; n < count; ++n) {
    // [int w~ u^n h_n (u h_{n+1} - h_{n-1})] [int w~ u^n h_n (u h_{n+1} + h_{n-1})]
    auto part = [&](double sign_mix) {
      auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const SignedLogProfile hn = families::an_profile_log(qz.spec, n, u);
        if (hn.sign == 0.0) return 0.0;
        const SignedLogProfile hup = families::an_profile_log(qz.spec, n + 1, u);
        const SignedLogProfile hdn =
            n > 0 ? families::an_profile_log(qz.spec, n - 1, u) : SignedLogProfile{};
        const double w = families::identity_weight(qz.spec, u) * weight_mod_at(qz, u);
        const double base = n * std::log(u) + hn.log_magnitude;
        double mix = 0.0;
        if (hup.sign != 0.0) {
          mix += hup.sign * std::exp(base + std::log(u) + hup.log_magnitude);
        }
        if (hdn.sign != 0.0) {
          mix += sign_mix * hdn.sign * std::exp(base + hdn.log_magnitude);
        }
        return w * hn.sign * mix;
      };
      const double scale = 1.0 + n;
      return quadrature::family_radial_integral(qz.spec, f, scale, qz.qspec).value;
    };
    out.factored[n] = part(-1.0) * part(1.0);
    out.max_deviation = std::max(out.max_deviation, std::abs(out.factored[n] - out.direct[n]));
  }
  return out;
}

complexd lower_symbol(const Quantizer& qz, const FockOperator& op, complexd alpha) {
  const FockVector v = families::coefficients(qz.spec, alpha, qz.cutoff);
  return fock::inner(v, op.apply(v));
}

TauResult lowering_weight_tau(const Quantizer& qz, double u) {
  const int count = qz.cutoff.n_max;
  const std::vector<double> a = lowering_entries(qz, count);
  TauResult out;
  double last = 0.0;
  for (int n = 0; n < count; ++n) {
    const SignedLogProfile hn = families::an_profile_log(qz.spec, n, u);
    const SignedLogProfile hup = families::an_profile_log(qz.spec, n + 1, u);
    if (hn.sign == 0.0 || hup.sign == 0.0) continue;
    const double u_pow = n == 0 ? 0.0 : n * std::log(u);  // u^0 = 1 also at u = 0
    last = a[n] * hn.sign * hup.sign *
           std::exp(u_pow + hn.log_magnitude + hup.log_magnitude);
    out.value += last;
  }
  if (out.value != 0.0) out.last_term_fraction = std::abs(last / out.value);
  return out;
}

double eigenstate_residual(const Quantizer& qz, complexd alpha) {
  const FockVector v = families::coefficients(qz.spec, alpha, qz.cutoff);
  const FockOperator a = lowering_operator(qz);
  const FockVector av = a.apply(v);
  // The top row is excluded only when it is a truncation artifact.  For a
  // finite-dimensional family fully contained in the space the last row is
  // physical, and it is exactly where the no-eigenvector obstruction lives.
  const auto fd = families::finite_dimension(qz.spec);
  const bool physical_top = fd && qz.cutoff.n_max >= *fd;
  const int rows = physical_top ? qz.cutoff.dim() : qz.cutoff.n_max;
  double acc = 0.0;
  for (int n = 0; n < rows; ++n) {
    acc += std::norm(av.coeffs[n] - alpha * v.coeffs[n]);
  }
  return std::sqrt(acc);
}

FockVector construct_from_vacuum(const FamilySpec& spec, complexd alpha,
                                 const FockCutoff& cutoff) {
  families::XSequence xs;
  if (std::holds_alternative<families::GlauberSudarshan>(spec)) {
    xs = families::XSequence::harmonic();
  } else if (const auto* qd = std::get_if<families::QDeformed>(&spec)) {
    xs = families::XSequence::q_deformed(qd->q);
  } else if (const auto* bg = std::get_if<families::BarutGirardello>(&spec)) {
    xs = families::XSequence::su11(bg->kappa);
  } else if (const auto* nl = std::get_if<families::NonlinearDeformed>(&spec)) {
    xs = nl->xs;
  } else {
    throw families::unsupported_family("construct_from_vacuum: " + families::family_name(spec) +
                                       " is not deformed-Poissonian");
  }
  const double u = std::norm(alpha);
  if (!(u < xs.radius_squared())) {
    throw std::domain_error("construct_from_vacuum: |alpha| outside convergence radius");
  }

  const int dim = cutoff.dim();
  FockOperator raise(dim);
  for (int n = 0; n + 1 < dim; ++n) raise.at(n + 1, n) = std::sqrt(xs.x(n + 1));

  // N(alpha a+) |0> = sum_k (alpha a+)^k / x_k! |0>, summed as iterated
  // matrix-vector products; terms beyond the cutoff leave the space and are
  // dropped, consistent with the truncation.
  FockVector term = fock::basis_vector(0, dim);
  FockVector acc = term;
  for (int k = 1; k < dim; ++k) {
    term = raise.apply(term);
    for (auto& c : term.coeffs) c *= alpha / xs.x(k);
    for (int i = 0; i < dim; ++i) acc.coeffs[i] += term.coeffs[i];
  }
  const double log_norm_value = [&] {
    double lt = 0.0, shift = 0.0, s = 1.0;
    const double lu = u > 0.0 ? std::log(u) : 0.0;
    if (u > 0.0) {
      for (int n = 1; n < 200000; ++n) {
        const double xn = xs.x(n);
        lt += lu - std::log(xn);
        if (lt > shift) {
          s = s * std::exp(shift - lt) + 1.0;
          shift = lt;
        } else {
          const double t = std::exp(lt - shift);
          s += t;
          if (t < 1e-17 * s && xn > u) break;
        }
      }
    }
    return shift + std::log(s);
  }();
  const double scale = std::exp(-0.5 * log_norm_value);
  for (auto& c : acc.coeffs) c *= scale;
  return acc;
}

FockVector displacement_cs(const FockOperator& plus, const FockOperator& minus,
                           complexd alpha_breve, int s) {
  if (plus.dim() != minus.dim()) {
    throw std::invalid_argument("displacement_cs: generator dimensions differ");
  }
  if ((minus - plus.adjoint()).max_abs() > 1e-12) {
    throw std::invalid_argument("displacement_cs: minus is not the adjoint of plus");
  }
  if (s < 0 || s >= plus.dim()) {
    throw std::out_of_range("displacement_cs: reference level outside the space");
  }
  const FockOperator gen = plus.scaled(alpha_breve) - minus.scaled(std::conj(alpha_breve));
  const FockOperator d = fock::matrix_exponential(gen);
  return d.apply(fock::basis_vector(s, plus.dim()));
}

std::pair<FockOperator, FockOperator> su2_generators(int n_j) {
  FockOperator plus(n_j + 1);
  for (int n = 1; n <= n_j; ++n) {
    plus.at(n - 1, n) = std::sqrt(static_cast<double>(n) * (n_j - n + 1));
  }
  return {plus, plus.adjoint()};
}

std::pair<FockOperator, FockOperator> su11_generators(double kappa, int n_max) {
  FockOperator plus(n_max + 1);
  for (int n = 0; n < n_max; ++n) {
    plus.at(n + 1, n) = std::sqrt((n + 1.0) * (2.0 * kappa + n));
  }
  return {plus, plus.adjoint()};
}

std::pair<FockOperator, FockOperator> weyl_generators(int n_max) {
  auto [a, adag] = fock::ladder_matrices(FockCutoff{n_max});
  return {adag, a};
}

complexd su2_parameter(complexd alpha) {
  const double r = std::abs(alpha);
  if (r == 0.0) return {0.0, 0.0};
  return -std::atan(r) * std::conj(alpha) / r;
}

complexd su11_parameter(complexd alpha) {
  const double r = std::abs(alpha);
  if (r == 0.0) return {0.0, 0.0};
  if (r >= 1.0) throw std::domain_error("su11_parameter: |alpha| must be < 1");
  return std::atanh(r) * alpha / r;
}

DisplacementProfileReport compare_displacement_profile(const Quantizer& qz,
                                                       complexd alpha_breve) {
  const FockOperator low = lowering_operator(qz);
  const FockVector disp = displacement_cs(low.adjoint(), low, alpha_breve, 0);
  const double u = std::norm(alpha_breve);

  DisplacementProfileReport out;
  const int dim = qz.cutoff.dim();
  out.h_disp.assign(dim, 0.0);
  out.h_family.assign(dim, 0.0);
  complexd pow_a(1.0, 0.0);
  for (int n = 0; n < dim; ++n) {
    // h_n^disp = phi_n^disp / alpha^n (real for real alpha; take the real
    // part of the rotated coefficient in general)
    if (std::abs(pow_a) > 0.0) {
      out.h_disp[n] = (disp.coeffs[n] / pow_a).real();
    }
    out.h_family[n] = families::an_profile(qz.spec, n, u);
    out.max_deviation = std::max(out.max_deviation, std::abs(out.h_disp[n] - out.h_family[n]));
    pow_a *= alpha_breve;
  }
  return out;
}

}  // namespace cohstate::quantize
