// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0
//
// cohstate: coherent-state families, photon statistics, moment-problem
// verification, and coherent-state quantization from the command line.
//
// Subcommands: coeffs, stats, sample, verify, quantize.
// Exit codes: 0 success; 1 verification failure; 2 bad configuration or
// domain error; 3 truncation failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cohstate/families.hpp"
#include "cohstate/json_io.hpp"
#include "cohstate/photostats.hpp"
#include "cohstate/quadrature.hpp"
#include "cohstate/quantize.hpp"

namespace {

using namespace cohstate;
using json = nlohmann::json;
using fock::complexd;
using fock::FockCutoff;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitTruncation = 3;

struct FamilyFlags {
  std::string family;
  std::string family_json;
  double s = 0.0;               // real for holomorphic_hermite, integer otherwise
  double q = 0.5;
  double kappa = 1.0;
  int n_j = 1;
  std::string xseq_path;
  std::string a_polys_json;     // inline JSON array for dfb families
  bool have_s = false, have_q = false, have_kappa = false, have_nj = false;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& ff) {
  cmd->add_option("--family", ff.family,
                  "family name: glauber|holomorphic_hermite|displaced_number|nonlinear|"
                  "qdeformed|spin|spin_jacobi|su11|barut_girardello|sgm|dfb_plane|dfb_spin");
  cmd->add_option("--family-json", ff.family_json,
                  "full FamilySpec as JSON text or @file path");
  cmd->add_option("--s", ff.s,
                  "family parameter s (real for holomorphic_hermite, integer level otherwise)")
      ->each([&ff](const std::string&) { ff.have_s = true; });
  cmd->add_option("--q", ff.q, "deformation parameter q")
      ->each([&ff](const std::string&) { ff.have_q = true; });
  cmd->add_option("--kappa", ff.kappa, "SU(1,1) parameter kappa")
      ->each([&ff](const std::string&) { ff.have_kappa = true; });
  cmd->add_option("--nj", ff.n_j, "spin dimension parameter n_j")
      ->each([&ff](const std::string&) { ff.have_nj = true; });
  cmd->add_option("--xseq", ff.xseq_path, "x-sequence JSON file for nonlinear families");
  cmd->add_option("--a-polys", ff.a_polys_json,
                  "dfb coefficient polynomials as JSON, e.g. [[0,1],[0.25]]");
}

int integer_level(double s) {
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9) {
    throw std::invalid_argument("--s must be an integer level for this family");
  }
  return static_cast<int>(r);
}

json read_json_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot open " + arg.substr(1));
    return json::parse(in);
  }
  return json::parse(arg);
}

families::FamilySpec build_family(const FamilyFlags& ff) {
  if (!ff.family_json.empty()) {
    return json_io::family_from_json(read_json_arg(ff.family_json));
  }
  if (ff.family.empty()) {
    throw std::invalid_argument("no family given (use --family or --family-json)");
  }
  json params = json::object();
  if (ff.have_q) params["q"] = ff.q;
  if (ff.have_kappa) params["kappa"] = ff.kappa;
  if (ff.have_nj) params["n_j"] = ff.n_j;
  if (ff.family == "holomorphic_hermite") {
    if (!ff.have_s) throw std::invalid_argument("holomorphic_hermite needs --s");
    params["s"] = ff.s;
  } else if (ff.have_s || ff.family == "displaced_number" || ff.family == "spin_jacobi") {
    params["s"] = integer_level(ff.s);
  }
  if (!ff.xseq_path.empty()) {
    std::ifstream in(ff.xseq_path);
    if (!in) throw std::invalid_argument("cannot open " + ff.xseq_path);
    params["x_seq"] = json::parse(in);
  } else if (ff.family == "nonlinear") {
    throw std::invalid_argument("nonlinear family needs --xseq file.json");
  }
  if (!ff.a_polys_json.empty()) params["a_polys"] = read_json_arg(ff.a_polys_json);
  return json_io::family_from_json(json{{"family", ff.family}, {"params", params}});
}

struct OutputFlags {
  std::string format = "json";
  std::string path;
};

void add_output_flags(CLI::App* cmd, OutputFlags& of) {
  cmd->add_option("--output", of.format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", of.path, "write to file instead of stdout");
}

void emit(const OutputFlags& of, const std::string& text) {
  if (of.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(of.path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + of.path);
  out << text;
}

quadrature::QuadratureSpec quad_spec_from_env() {
  quadrature::QuadratureSpec qs;
  if (const char* tol = std::getenv("COHSTATE_QUAD_TOL")) {
    qs.rel_tol = std::atof(tol);
    if (!(qs.rel_tol > 0.0)) throw std::invalid_argument("bad COHSTATE_QUAD_TOL");
  }
  return qs;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct AlphaList {
  std::vector<complexd> values;
};

AlphaList parse_alphas(const std::string& alpha, const std::string& grid) {
  AlphaList out;
  if (!alpha.empty()) out.values.push_back(json_io::parse_complex(alpha));
  if (!grid.empty()) {
    // r_min,r_max,steps[,phase]
    std::stringstream ss(grid);
    std::string tok;
    std::vector<double> parts;
    while (std::getline(ss, tok, ',')) parts.push_back(std::stod(tok));
    if (parts.size() < 3) throw std::invalid_argument("--alpha-grid needs r_min,r_max,steps");
    const int steps = static_cast<int>(parts[2]);
    if (steps < 1) throw std::invalid_argument("--alpha-grid needs steps >= 1");
    const double phase = parts.size() > 3 ? parts[3] : 0.0;
    for (int i = 0; i < steps; ++i) {
      const double r =
          steps == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (steps - 1.0);
      out.values.push_back(std::polar(r, phase));
    }
  }
  if (out.values.empty()) throw std::invalid_argument("no amplitude given (--alpha or --alpha-grid)");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_coeffs(const FamilyFlags& ff, const OutputFlags& of, const std::string& alpha,
               const std::string& grid, int n_max, double tail_tol) {
  const families::FamilySpec spec = build_family(ff);
  const AlphaList alphas = parse_alphas(alpha, grid);
  FockCutoff cutoff{n_max, tail_tol};
  if (n_max < 0) cutoff = families::auto_cutoff(spec, alphas.values.front(), tail_tol);

  if (of.format == "csv") {
    // single amplitude: the plain (n, Re, Im, P_n) table; grids prepend the
    // amplitude column
    const bool grid_mode = alphas.values.size() > 1;
    std::ostringstream os;
    os << (grid_mode ? "alpha,n,re_phi,im_phi,p_n\n" : "n,re_phi,im_phi,p_n\n");
    for (const auto a : alphas.values) {
      const auto v = families::coefficients(spec, a, cutoff);
      for (int n = 0; n < v.dim(); ++n) {
        if (grid_mode) os << json_io::format_complex(a) << ',';
        os << n << ',' << fmt(v.coeffs[n].real()) << ',' << fmt(v.coeffs[n].imag()) << ','
           << fmt(std::norm(v.coeffs[n])) << '\n';
      }
    }
    emit(of, os.str());
  } else {
    json rows = json::array();
    for (const auto a : alphas.values) {
      const auto v = families::coefficients(spec, a, cutoff);
      json coeffs = json::array();
      for (int n = 0; n < v.dim(); ++n) {
        coeffs.push_back(json::array({v.coeffs[n].real(), v.coeffs[n].imag()}));
      }
      rows.push_back(json{{"alpha", json_io::format_complex(a)},
                          {"coefficients", coeffs},
                          {"tail_mass", v.tail_mass}});
    }
    const json doc{{"family", json_io::to_json(spec)}, {"n_max", cutoff.n_max},
                   {"states", rows}};
    emit(of, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_stats(const FamilyFlags& ff, const OutputFlags& of, const std::string& alpha,
              const std::string& grid, int n_max, double tail_tol, double eta,
              bool pn_table) {
  const families::FamilySpec spec = build_family(ff);
  const AlphaList alphas = parse_alphas(alpha, grid);

  if (pn_table) {
    if (alphas.values.size() != 1) {
      throw std::invalid_argument("--pn-table takes a single --alpha");
    }
    const auto a = alphas.values.front();
    FockCutoff cutoff{n_max, tail_tol};
    if (n_max < 0) cutoff = families::auto_cutoff(spec, a, tail_tol);
    const auto stats = photostats::detection_distribution(spec, a, cutoff);
    std::ostringstream os;
    photostats::write_pn_csv(os, stats);
    emit(of, os.str());
    return 0;
  }

  std::ostringstream csv;
  json rows = json::array();
  if (of.format == "csv") {
    csv << "alpha,nbar,variance,mandel_q,class,detector_mean,detector_variance\n";
  }
  for (const auto a : alphas.values) {
    FockCutoff cutoff{n_max, tail_tol};
    if (n_max < 0) cutoff = families::auto_cutoff(spec, a, tail_tol);
    const auto stats = photostats::detection_distribution(spec, a, cutoff);
    const auto det = photostats::detector_transform(stats, photostats::DetectorModel{eta});
    if (of.format == "csv") {
      csv << json_io::format_complex(a) << ',' << fmt(stats.mean) << ',' << fmt(stats.variance)
          << ',' << fmt(stats.mandel_q) << ',' << photostats::to_string(stats.cls) << ','
          << fmt(det.mean) << ',' << fmt(det.variance) << '\n';
    } else {
      json row = json_io::to_json(stats);
      row["alpha"] = json_io::format_complex(a);
      row["detector"] = json{{"eta", eta}, {"mean", det.mean}, {"variance", det.variance}};
      rows.push_back(row);
    }
  }
  if (of.format == "csv") {
    emit(of, csv.str());
  } else {
    emit(of, json{{"family", json_io::to_json(spec)}, {"stats", rows}}.dump(2) + "\n");
  }
  return 0;
}

int cmd_sample(const FamilyFlags& ff, const OutputFlags& of, const std::string& alpha,
               int n_max, double tail_tol, double eta, long shots, std::uint64_t seed) {
  const families::FamilySpec spec = build_family(ff);
  const complexd a = json_io::parse_complex(alpha);
  FockCutoff cutoff{n_max, tail_tol};
  if (n_max < 0) cutoff = families::auto_cutoff(spec, a, tail_tol);
  const auto counts =
      photostats::sample_counts(spec, a, photostats::DetectorModel{eta}, shots, seed, cutoff);
  std::ostringstream os;
  for (int c : counts) os << c << '\n';
  emit(of, os.str());
  return 0;
}

int cmd_verify(const FamilyFlags& ff, const OutputFlags& of, const std::string& suite,
               int n_max, double tail_tol) {
  const families::FamilySpec spec = build_family(ff);
  const quadrature::QuadratureSpec qs = quad_spec_from_env();
  json reports = json::array();
  bool all_passed = true;

  if (suite == "normalization") {
    const double radius = families::domain_radius(spec);
    const double r_max = std::isfinite(radius) ? 0.9 * radius : 2.5;
    for (int i = 1; i <= 20; ++i) {
      const complexd a = std::polar(r_max * i / 20.0, 0.37 * i);
      const auto cutoff = families::auto_cutoff(spec, a, tail_tol);
      const auto v = families::coefficients(spec, a, cutoff);
      const double residual = std::abs(v.norm_squared() + v.tail_mass - 1.0);
      const bool ok = residual <= 1e-9 + v.tail_mass;
      all_passed = all_passed && ok;
      reports.push_back(json{{"target", "normalization(alpha=" + json_io::format_complex(a) + ")"},
                             {"residual", residual},
                             {"threshold", 1e-9 + v.tail_mass},
                             {"passed", ok},
                             {"evaluations", cutoff.n_max + 1}});
    }
  } else if (suite == "moments") {
    const int top = n_max < 0 ? 15 : n_max;
    for (int n = 0; n <= top; ++n) {
      const auto rep = quadrature::verify_moment_problem(spec, n, qs);
      all_passed = all_passed && rep.passed;
      reports.push_back(json_io::to_json(rep));
    }
  } else if (suite == "gram") {
    const int top = n_max < 0 ? 15 : n_max;
    const auto res = quadrature::gram_identity(spec, top, qs);
    all_passed = res.report.passed;
    reports.push_back(json_io::to_json(res.report));
  } else if (suite == "quantizer") {
    const int top = n_max < 0 ? 20 : n_max;
    quantize::Quantizer qz = quantize::make_quantizer(spec, FockCutoff{top, tail_tol}, qs);
    const auto check = quantize::commutator_check(qz);
    const bool ok = check.max_deviation <= 1e-8;
    all_passed = ok;
    reports.push_back(json{{"target", "commutator factorization"},
                           {"residual", check.max_deviation},
                           {"threshold", 1e-8},
                           {"passed", ok},
                           {"evaluations", 0}});
  } else {
    throw std::invalid_argument("unknown suite '" + suite +
                                "' (normalization|moments|gram|quantizer)");
  }

  emit(of, json{{"family", json_io::to_json(spec)},
                {"suite", suite},
                {"passed", all_passed},
                {"reports", reports}}
               .dump(2) +
               "\n");
  return all_passed ? 0 : kExitVerifyFailed;
}

int cmd_quantize(const FamilyFlags& ff, const OutputFlags& of, const std::string& symbol,
                 const std::string& generators, const std::string& alpha, int n_max,
                 double tail_tol) {
  const families::FamilySpec spec = build_family(ff);
  const quadrature::QuadratureSpec qs = quad_spec_from_env();
  const int top = n_max < 0 ? 32 : n_max;

  if (generators == "su2" || generators == "su11") {
    const complexd a = json_io::parse_complex(alpha.empty() ? "0.5" : alpha);
    fock::FockVector disp;
    if (generators == "su2") {
      const auto* sj = std::get_if<families::SpinJacobi>(&spec);
      const auto* sp = std::get_if<families::Spin>(&spec);
      if (sj == nullptr && sp == nullptr) {
        throw std::invalid_argument("--generators su2 needs a spin or spin_jacobi family");
      }
      const int n_j = sj ? sj->n_j : sp->n_j;
      const int s = sj ? sj->s : 0;
      auto [jp, jm] = quantize::su2_generators(n_j);
      disp = quantize::displacement_cs(jp, jm, quantize::su2_parameter(a), s);
    } else {
      const auto* su = std::get_if<families::SU11Perelomov>(&spec);
      if (su == nullptr) throw std::invalid_argument("--generators su11 needs an su11 family");
      auto [kp, km] = quantize::su11_generators(su->kappa, top);
      disp = quantize::displacement_cs(kp, km, quantize::su11_parameter(a), su->s);
    }
    json coeffs = json::array();
    for (int n = 0; n < disp.dim(); ++n) {
      coeffs.push_back(json::array({disp.coeffs[n].real(), disp.coeffs[n].imag()}));
    }
    emit(of, json{{"family", json_io::to_json(spec)},
                  {"generators", generators},
                  {"alpha", json_io::format_complex(a)},
                  {"coefficients", coeffs}}
                 .dump(2) +
                 "\n");
    return 0;
  }

  quantize::Quantizer qz = quantize::make_quantizer(spec, FockCutoff{top, tail_tol}, qs);

  if (generators == "integral" && !alpha.empty()) {
    // displace the vacuum with the integral-built ladder pair and report the
    // resulting profile against the family's h_n
    const complexd a = json_io::parse_complex(alpha);
    const auto rep = quantize::compare_displacement_profile(qz, a);
    emit(of, json{{"family", json_io::to_json(spec)},
                  {"alpha", json_io::format_complex(a)},
                  {"h_displaced", rep.h_disp},
                  {"h_family", rep.h_family},
                  {"max_deviation", rep.max_deviation}}
                 .dump(2) +
                 "\n");
    return 0;
  }

  fock::FockOperator op;
  std::string label;
  if (symbol.empty()) {
    op = quantize::lowering_operator(qz);
    label = "lowering";
  } else {
    // "g:u^<p> m:<int>"
    double power = 1.0;
    int m = 0;
    std::stringstream ss(symbol);
    std::string tok;
    bool saw_g = false;
    while (ss >> tok) {
      if (tok.rfind("g:u^", 0) == 0) {
        power = std::stod(tok.substr(4));
        saw_g = true;
      } else if (tok.rfind("m:", 0) == 0) {
        m = std::stoi(tok.substr(2));
      } else {
        throw std::invalid_argument("bad --symbol token '" + tok + "' (want g:u^<p> m:<int>)");
      }
    }
    if (!saw_g) throw std::invalid_argument("--symbol needs g:u^<p>");
    op = quantize::quantize_symbol(
        qz, quantize::SeparableSymbol{m, [power](double u) { return std::pow(u, power); }});
    label = symbol;
  }
  json doc = json_io::to_json(op);
  doc["symbol"] = label;
  doc["family"] = json_io::to_json(spec);
  emit(of, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherent-state families, photon statistics, and quantization"};
  app.require_subcommand(1);

  FamilyFlags ff;
  OutputFlags of;
  std::string alpha, grid, suite = "normalization", symbol, generators = "integral";
  int n_max = -1;
  double tail_tol = 1e-9;
  double eta = 1.0;
  long shots = 1000;
  std::uint64_t seed = 0;

  auto* coeffs = app.add_subcommand("coeffs", "Fock coefficients and P_n table");
  auto* stats = app.add_subcommand("stats", "photon statistics and detector moments");
  auto* sample = app.add_subcommand("sample", "Monte-Carlo photocount sampling");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* quant = app.add_subcommand("quantize", "build quantized operators");

  for (CLI::App* cmd : {coeffs, stats, sample, verify, quant}) {
    add_family_flags(cmd, ff);
    add_output_flags(cmd, of);
    cmd->add_option("--nmax", n_max, "Fock cutoff (default: auto)");
    cmd->add_option("--tail-tol", tail_tol, "admissible discarded probability mass");
    cmd->add_option("--seed", seed, "RNG seed (used by sample; determinism contract)");
  }
  for (CLI::App* cmd : {coeffs, stats}) {
    cmd->add_option("--alpha", alpha, "amplitude as a+bi");
    cmd->add_option("--alpha-grid", grid, "r_min,r_max,steps[,phase]");
  }
  sample->add_option("--alpha", alpha, "amplitude as a+bi")->required();
  stats->add_option("--eta", eta, "detector quantum efficiency in (0,1]");
  bool pn_table = false;
  stats->add_flag("--pn-table", pn_table, "emit the n,p_n,cumulative CSV table");
  sample->add_option("--eta", eta, "detector quantum efficiency in (0,1]");
  sample->add_option("--shots", shots, "number of Monte-Carlo shots");
  verify->add_option("--suite", suite, "normalization|moments|gram|quantizer");
  quant->add_option("--symbol", symbol, "separable symbol, e.g. \"g:u^1 m:0\"");
  quant->add_option("--generators", generators, "su2|su11|integral");
  quant->add_option("--alpha", alpha, "displacement amplitude for group generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitBadConfig;
  }

  try {
    if (coeffs->parsed()) return cmd_coeffs(ff, of, alpha, grid, n_max, tail_tol);
    if (stats->parsed()) return cmd_stats(ff, of, alpha, grid, n_max, tail_tol, eta, pn_table);
    if (sample->parsed()) return cmd_sample(ff, of, alpha, n_max, tail_tol, eta, shots, seed);
    if (verify->parsed()) return cmd_verify(ff, of, suite, n_max, tail_tol);
    if (quant->parsed()) return cmd_quantize(ff, of, symbol, generators, alpha, n_max, tail_tol);
  } catch (const fock::truncation_error& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return kExitBadConfig;
}
