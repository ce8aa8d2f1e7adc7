// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: every release-gating identity and property, one pass/fail
// line per criterion.  Exits nonzero if any criterion fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cohstate/families.hpp"
#include "cohstate/fock.hpp"
#include "cohstate/json_io.hpp"
#include "cohstate/photostats.hpp"
#include "cohstate/quadrature.hpp"
#include "cohstate/quantize.hpp"
#include "cohstate/specfun.hpp"

using namespace cohstate;
using fock::complexd;
using fock::FockCutoff;
using fock::FockVector;
using families::FamilySpec;
using families::Polynomial;
using families::XSequence;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool passed, const std::string& detail) {
  std::printf("%s  criterion %2d: %-34s %s\n", passed ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!passed) ++g_failures;
}

std::string worst_str(double worst, double threshold) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(worst %.3e, threshold %.1e)", worst, threshold);
  return buf;
}

std::vector<complexd> amplitudes(double r_max, int count, unsigned seed) {
  // deterministic low-discrepancy-ish grid with varied phases
  std::vector<complexd> out;
  for (int i = 1; i <= count; ++i) {
    const double r = r_max * i / count;
    const double phase = 2.399963 * (i + seed);  // golden-angle spacing
    out.push_back(std::polar(r, phase));
  }
  return out;
}

// --------------------------------------------------------------------------
// 1. normalization across every family, >= 5 parameter settings x >= 20
//    amplitudes, |sum P_n - 1| <= 1e-9 + tail
void criterion_normalization() {
  struct Setting {
    FamilySpec spec;
    double r_max;
  };
  std::vector<Setting> settings;
  auto add = [&](FamilySpec spec, double r_max = 2.5) {
    settings.push_back({std::move(spec), r_max});
  };

  for (double tt : {1e-9, 1e-10, 1e-11, 1e-12, 1e-13}) {
    (void)tt;
    add(families::GlauberSudarshan{}, 2.8);  // settings differ by grid below
  }
  for (double s : {0.2, 0.35, 0.5, 0.65, 0.8}) add(families::HolomorphicHermite{s}, 3.0);
  for (int s : {0, 1, 2, 3, 5}) add(families::DisplacedNumber{s}, 2.2);
  add(families::NonlinearDeformed{XSequence::harmonic()});
  add(families::NonlinearDeformed{XSequence::su11(1.5)});
  add(families::NonlinearDeformed{XSequence::su11(3.0)});
  add(families::NonlinearDeformed{XSequence::q_deformed(0.7)});
  {
    std::vector<double> tbl;
    for (int n = 1; n <= 80; ++n) tbl.push_back(0.5 * n * (n + 1));
    add(families::NonlinearDeformed{XSequence::table(std::move(tbl))}, 2.0);
  }
  for (double q : {0.3, 0.5, 0.8, 1.2, 2.0}) add(families::QDeformed{q}, 2.0);
  for (int nj : {1, 2, 5, 10, 25}) add(families::Spin{nj}, 3.0);
  add(families::SpinJacobi{5, 2}, 3.0);
  add(families::SpinJacobi{8, 0}, 3.0);
  add(families::SpinJacobi{8, 5}, 3.0);
  add(families::SpinJacobi{12, 3}, 3.0);
  add(families::SpinJacobi{16, 8}, 2.0);
  add(families::SU11Perelomov{0.5, 0}, 0.9);
  add(families::SU11Perelomov{0.75, 0}, 0.9);
  add(families::SU11Perelomov{1.0, 2}, 0.85);
  add(families::SU11Perelomov{2.0, 1}, 0.85);
  add(families::SU11Perelomov{3.0, 0}, 0.9);
  for (double k : {0.6, 0.75, 1.0, 2.0, 4.0}) add(families::BarutGirardello{k}, 2.5);
  for (int i = 0; i < 5; ++i) add(families::SusskindGlogowerModified{}, 2.0 + 0.5 * i);
  const Polynomial a1({0.0, 1.0});
  add(families::DFBPlane{{a1}});
  add(families::DFBPlane{{a1, Polynomial({0.2})}});
  add(families::DFBPlane{{a1, Polynomial({0.5})}});
  add(families::DFBPlane{{a1, Polynomial({0.0}), Polynomial({0.1})}});
  add(families::DFBPlane{{a1, Polynomial({0.1}), Polynomial({0.05})}});
  add(families::DFBSpin{6, {a1}}, 3.0);
  add(families::DFBSpin{8, {a1, Polynomial({0.2})}}, 3.0);
  add(families::DFBSpin{10, {a1}}, 2.0);
  add(families::DFBSpin{12, {a1, Polynomial({0.3})}}, 2.0);
  add(families::DFBSpin{7, {a1, Polynomial({0.1}), Polynomial({0.05})}}, 2.0);

  double worst = 0.0;
  bool ok = true;
  unsigned seed = 0;
  for (const auto& setting : settings) {
    for (const auto alpha : amplitudes(setting.r_max, 20, ++seed)) {
      const auto cutoff = families::auto_cutoff(setting.spec, alpha);
      const FockVector v = families::coefficients(setting.spec, alpha, cutoff);
      const double defect = std::abs(v.norm_squared() + v.tail_mass - 1.0);
      const double allowed = 1e-9 + v.tail_mass;
      worst = std::max(worst, defect - v.tail_mass);
      ok = ok && (defect <= allowed);
    }
  }
  report(1, "normalization suite", ok, worst_str(worst, 1e-9));
}

// --------------------------------------------------------------------------
// 2. gram identity residual <= 1e-6 at N = 15 (N = 8 for the 2D family)
void criterion_gram() {
  quadrature::QuadratureSpec qs;
  struct Case {
    FamilySpec spec;
    int n_upper;
  };
  const Polynomial a1({0.0, 1.0});
  std::vector<Case> cases = {
      {families::GlauberSudarshan{}, 15},
      {families::Spin{10}, 15},
      {families::SpinJacobi{10, 3}, 15},
      {families::QDeformed{0.5}, 15},
      {families::BarutGirardello{1.0}, 15},
      {families::SusskindGlogowerModified{}, 15},
      {families::DFBPlane{{a1}}, 15},
      {families::HolomorphicHermite{0.5}, 8},
  };
  for (double kappa : {0.75, 1.0, 2.0}) {
    for (int s : {0, 2}) {
      cases.push_back({families::SU11Perelomov{kappa, s}, 15});
    }
  }
  double worst = 0.0;
  bool ok = true;
  for (const auto& c : cases) {
    const auto res = quadrature::gram_identity(c.spec, c.n_upper, qs);
    worst = std::max(worst, res.report.residual);
    ok = ok && res.report.passed;
  }
  report(2, "gram/identity suite", ok, worst_str(worst, 1e-6));
}

// --------------------------------------------------------------------------
// 3. bessel identities
void criterion_bessel() {
  double worst_norm = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    double sum = 0.0;
    const int n_max = static_cast<int>(2.0 * x) + 42;
    for (int n = 1; n <= n_max; ++n) {
      const double j = specfun::bessel_j(n, 2.0 * x);
      sum += static_cast<double>(n) * n * j * j;
    }
    worst_norm = std::max(worst_norm, std::abs(sum - x * x));
  }

  double worst_int = 0.0;
  quadrature::QuadratureSpec qs;
  for (int n = 1; n <= 10; ++n) {
    const auto r = quadrature::bessel_squared_over_t(n, qs);
    worst_int = std::max(worst_int, std::abs(r.value - 0.5 / n));
  }
  const bool ok = worst_norm <= 1e-10 && worst_int <= 1e-6;
  char detail[128];
  std::snprintf(detail, sizeof detail, "(norm id %.2e <= 1e-10, integral id %.2e <= 1e-6)",
                worst_norm, worst_int);
  report(3, "bessel identities", ok, detail);
}

// --------------------------------------------------------------------------
// 4. statistics sign laws and the bose-einstein boundary
void criterion_sign_laws() {
  bool ok = true;
  double worst = 0.0;

  for (const auto alpha : amplitudes(2.5, 20, 5)) {
    const auto st = photostats::detection_distribution(
        families::GlauberSudarshan{}, alpha, families::auto_cutoff(families::GlauberSudarshan{}, alpha));
    worst = std::max(worst, std::abs(st.mandel_q));
    ok = ok && std::abs(st.mandel_q) <= 1e-9;
  }

  const int n_j = 14;
  for (const auto alpha : amplitudes(2.5, 20, 6)) {
    const auto st =
        photostats::detection_distribution(families::Spin{n_j}, alpha, FockCutoff{n_j});
    const double p = std::norm(alpha) / (1.0 + std::norm(alpha));
    worst = std::max(worst, std::abs(st.mandel_q + p));
    ok = ok && std::abs(st.mandel_q + p) <= 1e-9;
  }

  const double kappa = 1.25;
  for (const auto alpha : amplitudes(0.9, 20, 7)) {
    const FamilySpec spec = families::SU11Perelomov{kappa, 0};
    const auto st = photostats::detection_distribution(spec, alpha,
                                                       families::auto_cutoff(spec, alpha));
    const double nbar = 2.0 * kappa * std::norm(alpha) / (1.0 - std::norm(alpha));
    worst = std::max(worst, std::abs(st.mandel_q - nbar / (2.0 * kappa)));
    ok = ok && std::abs(st.mandel_q - nbar / (2.0 * kappa)) <= 1e-8;
  }

  // kappa = 1/2: P_n = nbar^n/(1+nbar)^{n+1}
  {
    const complexd alpha(0.62, 0.0);
    const double u = std::norm(alpha);
    const FamilySpec spec = families::SU11Perelomov{0.5, 0};
    const auto st = photostats::detection_distribution(spec, alpha,
                                                       families::auto_cutoff(spec, alpha));
    const double nbar = u / (1.0 - u);
    for (int n = 0; n <= 40; ++n) {
      const double want = std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1);
      worst = std::max(worst, std::abs(st.pn[n] - want));
      ok = ok && std::abs(st.pn[n] - want) <= 1e-12;
    }
  }
  report(4, "statistics sign laws", ok, worst_str(worst, 1e-8));
}

// --------------------------------------------------------------------------
// 5. contraction of the spin family to the poissonian at n_j = 10^4
void criterion_contraction() {
  const int n_j = 10000;
  double worst = 0.0;
  for (double u : {0.5, 1.0, 2.0}) {
    const complexd alpha(std::sqrt(u / n_j), 0.0);  // rescaled amplitude
    const int top = static_cast<int>(u + 20.0 * std::sqrt(u) + 40.0);
    const auto st =
        photostats::detection_distribution(families::Spin{n_j}, alpha, FockCutoff{top});
    double tv = 0.0;
    double poisson_seen = 0.0;
    for (int n = 0; n <= top; ++n) {
      const double poisson = std::exp(-u + n * std::log(u) - specfun::log_factorial(n));
      poisson_seen += poisson;
      tv += std::abs(st.pn[n] - poisson);
    }
    tv = 0.5 * (tv + (1.0 - poisson_seen) + st.tail_mass);
    worst = std::max(worst, tv);
  }
  report(5, "spin -> poisson contraction", worst <= 1e-3, worst_str(worst, 1e-3));
}

// --------------------------------------------------------------------------
// 6. monte-carlo detector model vs the variance relation, 4 standard errors
void criterion_detector_mc() {
  struct Input {
    FamilySpec spec;
    complexd alpha;
  };
  const std::vector<Input> inputs = {
      {families::GlauberSudarshan{}, complexd(2.0, 0.0)},
      {families::Spin{12}, complexd(0.8, 0.4)},
      {families::SU11Perelomov{1.0, 0}, complexd(0.55, -0.2)},
  };
  const long shots = 1000000;
  bool ok = true;
  double worst_sigmas = 0.0;
  std::uint64_t seed = 20260808;
  for (const auto& in : inputs) {
    const auto cutoff = families::auto_cutoff(in.spec, in.alpha);
    const auto stats = photostats::detection_distribution(in.spec, in.alpha, cutoff);
    for (double eta : {0.1, 0.5, 1.0}) {
      const auto counts = photostats::sample_counts(in.spec, in.alpha,
                                                    photostats::DetectorModel{eta}, shots,
                                                    seed++, cutoff);
      double mean = 0.0;
      for (int c : counts) mean += c;
      mean /= shots;
      double m2 = 0.0, m4 = 0.0;
      for (int c : counts) {
        const double d = c - mean;
        m2 += d * d;
        m4 += d * d * d * d;
      }
      m2 /= shots;
      m4 /= shots;
      const auto want = photostats::detector_transform(stats, photostats::DetectorModel{eta});
      const double se_var = std::sqrt(std::max(m4 - m2 * m2, 1e-30) / shots);
      const double sigmas = std::abs(m2 - want.variance) / se_var;
      worst_sigmas = std::max(worst_sigmas, sigmas);
      ok = ok && sigmas <= 4.0;
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "(worst %.2f standard errors, threshold 4)", worst_sigmas);
  report(6, "detector monte-carlo", ok, detail);
}

// --------------------------------------------------------------------------
// 7. quantization oracles: glauber ladder, commutator, BG eigenstates
void criterion_quantizer() {
  bool ok = true;
  double worst = 0.0;

  const auto glauber = quantize::make_quantizer(families::GlauberSudarshan{}, FockCutoff{32});
  const auto entries = quantize::lowering_entries(glauber, 30);
  for (int n = 1; n <= 30; ++n) {
    const double dev = std::abs(entries[n - 1] - std::sqrt(static_cast<double>(n)));
    worst = std::max(worst, dev);
    ok = ok && dev <= 1e-8;
  }
  const auto comm = quantize::commutator_spectrum(glauber);
  for (double v : comm) {
    worst = std::max(worst, std::abs(v - 1.0));
    ok = ok && std::abs(v - 1.0) <= 1e-8;
  }

  const auto bg = quantize::make_quantizer(families::BarutGirardello{1.0}, FockCutoff{56});
  for (double r : {1.0, 4.0}) {
    const double res = quantize::eigenstate_residual(bg, complexd(r, 0.0));
    worst = std::max(worst, res);
    ok = ok && res <= 1e-7;
  }
  report(7, "quantization oracle", ok, worst_str(worst, 1e-7));
}

// --------------------------------------------------------------------------
// 8. group displacement cross-checks
void criterion_displacement() {
  bool ok = true;
  double worst = 0.0;

  const int n_j = 8;
  auto [jp, jm] = quantize::su2_generators(n_j);
  for (int s : {0, 1, 3}) {
    for (const complexd alpha : {complexd(0.6, 0.0), std::polar(1.4, 0.9),
                                 std::polar(0.35, -2.1)}) {
      const FockVector disp =
          quantize::displacement_cs(jp, jm, quantize::su2_parameter(alpha), s);
      const FockVector fam =
          families::coefficients(families::SpinJacobi{n_j, s}, alpha, FockCutoff{n_j});
      const complexd phase = std::exp(complexd(0.0, -s * std::arg(alpha)));
      for (int n = 0; n <= n_j; ++n) {
        const double dev = std::abs(disp.coeffs[n] - phase * fam.coeffs[n]);
        worst = std::max(worst, dev);
        ok = ok && dev <= 1e-8;
      }
    }
  }

  const double kappa = 1.0;
  const int n_max = 260;
  auto [kp, km] = quantize::su11_generators(kappa, n_max);
  for (const complexd alpha : {complexd(0.3, 0.0), std::polar(0.6, 1.2),
                               std::polar(0.9, -0.4)}) {
    const FockVector disp =
        quantize::displacement_cs(kp, km, quantize::su11_parameter(alpha), 0);
    const FockVector fam =
        families::coefficients(families::SU11Perelomov{kappa, 0}, alpha, FockCutoff{n_max});
    for (int n = 0; n <= 200; ++n) {
      const double dev = std::abs(disp.coeffs[n] - fam.coeffs[n]);
      worst = std::max(worst, dev);
      ok = ok && dev <= 1e-8;
    }
  }
  report(8, "group displacement cross-checks", ok, worst_str(worst, 1e-8));
}

// --------------------------------------------------------------------------
// 9. dual-path equality of the vacuum construction formula
void criterion_dual_path() {
  bool ok = true;
  double worst = 0.0;
  struct Case {
    FamilySpec spec;
    complexd alpha;
  };
  for (const auto& c : {Case{families::GlauberSudarshan{}, complexd(1.2, 0.7)},
                        Case{families::QDeformed{0.5}, complexd(0.5, -0.3)},
                        Case{families::BarutGirardello{1.0}, complexd(1.0, 1.0)}}) {
    const FockCutoff cutoff{56};
    const FockVector built = quantize::construct_from_vacuum(c.spec, c.alpha, cutoff);
    const FockVector direct = families::coefficients(c.spec, c.alpha, cutoff);
    for (int n = 0; n < cutoff.dim(); ++n) {
      const double dev = std::abs(built.coeffs[n] - direct.coeffs[n]);
      worst = std::max(worst, dev);
      ok = ok && dev <= 1e-10;
    }
  }
  report(9, "vacuum-construction dual path", ok, worst_str(worst, 1e-10));
}

// --------------------------------------------------------------------------
// 10. CLI determinism and FamilySpec round-trip
void criterion_cli() {
  const char* cli = std::getenv("COHSTATE_CLI");
  if (cli == nullptr) {
    report(10, "cli determinism and round-trip", false, "(COHSTATE_CLI not set)");
    return;
  }
  auto run = [&](const std::string& args, const std::string& out_path) {
    const std::string cmd = std::string(cli) + " " + args + " >" + out_path + " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = true;
  const std::string sample_args =
      "sample --family glauber --alpha 2+0i --eta 0.3 --shots 50000 --seed 7";
  ok = ok && run(sample_args, "/tmp/acc_cli_a") == 0;
  ok = ok && run(sample_args, "/tmp/acc_cli_b") == 0;
  const std::string a = slurp("/tmp/acc_cli_a");
  ok = ok && !a.empty() && a == slurp("/tmp/acc_cli_b");

  // round-trip: emitted FamilySpec JSON reparses to an equivalent spec
  ok = ok && run("stats --family dfb_spin --nj 6 --alpha 0.4+0.2i", "/tmp/acc_cli_c") == 0;
  bool roundtrip = false;
  try {
    const auto doc = nlohmann::json::parse(slurp("/tmp/acc_cli_c"));
    const FamilySpec spec = json_io::family_from_json(doc.at("family"));
    roundtrip = json_io::to_json(spec) == doc.at("family");
  } catch (const std::exception&) {
    roundtrip = false;
  }
  ok = ok && roundtrip;
  report(10, "cli determinism and round-trip", ok, ok ? "(byte-identical)" : "(mismatch)");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");
  criterion_normalization();
  criterion_gram();
  criterion_bessel();
  criterion_sign_laws();
  criterion_contraction();
  criterion_detector_mc();
  criterion_quantizer();
  criterion_displacement();
  criterion_dual_path();
  criterion_cli();
  std::printf("----------------\n%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILED",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
