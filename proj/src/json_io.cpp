// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/json_io.hpp"

#include <cmath>

namespace cohstate::json_io {

using namespace cohstate::families;

json to_json(const XSequence& xs) {
  switch (xs.kind) {
    case XSequence::Kind::Harmonic:
      return json{{"kind", "closed_form"}, {"name", "harmonic"}};
    case XSequence::Kind::SU11:
      return json{{"kind", "closed_form"}, {"name", "su11"}, {"kappa", xs.kappa}};
    case XSequence::Kind::QDeformed:
      return json{{"kind", "closed_form"}, {"name", "qdeformed"}, {"q", xs.q}};
    case XSequence::Kind::Table: {
      json j{{"kind", "table"}, {"values", xs.values}};
      if (std::isfinite(xs.table_radius_sq)) j["radius_sq"] = xs.table_radius_sq;
      return j;
    }
  }
  throw std::logic_error("to_json: bad XSequence kind");
}

XSequence xseq_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "table") {
    auto values = j.at("values").get<std::vector<double>>();
    double r2 = std::numeric_limits<double>::infinity();
    if (j.contains("radius_sq")) r2 = j.at("radius_sq").get<double>();
    return XSequence::table(std::move(values), r2);
  }
  if (kind != "closed_form") {
    throw std::invalid_argument("xseq_from_json: kind must be closed_form or table");
  }
  const std::string name = j.at("name").get<std::string>();
  if (name == "harmonic") return XSequence::harmonic();
  if (name == "su11") return XSequence::su11(j.at("kappa").get<double>());
  if (name == "qdeformed") return XSequence::q_deformed(j.at("q").get<double>());
  throw std::invalid_argument("xseq_from_json: unknown closed form '" + name + "'");
}

namespace {

json polys_to_json(const std::vector<Polynomial>& polys) {
  json arr = json::array();
  for (const auto& p : polys) arr.push_back(p.coeffs());
  return arr;
}

std::vector<Polynomial> polys_from_json(const json& j) {
  std::vector<Polynomial> out;
  for (const auto& item : j) out.emplace_back(item.get<std::vector<double>>());
  return out;
}

}  // namespace

json to_json(const FamilySpec& spec) {
  json params = json::object();
  struct Visitor {
    json& params;
    void operator()(const GlauberSudarshan&) const {}
    void operator()(const HolomorphicHermite& f) const { params["s"] = f.s; }
    void operator()(const DisplacedNumber& f) const { params["s"] = f.s; }
    void operator()(const NonlinearDeformed& f) const { params["x_seq"] = to_json(f.xs); }
    void operator()(const QDeformed& f) const { params["q"] = f.q; }
    void operator()(const Spin& f) const { params["n_j"] = f.n_j; }
    void operator()(const SpinJacobi& f) const {
      params["n_j"] = f.n_j;
      params["s"] = f.s;
    }
    void operator()(const SU11Perelomov& f) const {
      params["kappa"] = f.kappa;
      params["s"] = f.s;
    }
    void operator()(const BarutGirardello& f) const { params["kappa"] = f.kappa; }
    void operator()(const SusskindGlogowerModified&) const {}
    void operator()(const DFBPlane& f) const {
      params["a_polys"] = polys_to_json(f.a_polys);
      if (f.xs) params["x_seq"] = to_json(*f.xs);
    }
    void operator()(const DFBSpin& f) const {
      params["n_j"] = f.n_j;
      params["a_polys"] = polys_to_json(f.a_polys);
      if (f.xs) params["x_seq"] = to_json(*f.xs);
    }
  };
  std::visit(Visitor{params}, spec);
  return json{{"family", family_name(spec)}, {"params", params}};
}

FamilySpec family_from_json(const json& j) {
  const std::string name = j.at("family").get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  FamilySpec spec;
  if (name == "glauber") {
    spec = GlauberSudarshan{};
  } else if (name == "holomorphic_hermite") {
    spec = HolomorphicHermite{params.at("s").get<double>()};
  } else if (name == "displaced_number") {
    spec = DisplacedNumber{params.at("s").get<int>()};
  } else if (name == "nonlinear") {
    spec = NonlinearDeformed{xseq_from_json(params.at("x_seq"))};
  } else if (name == "qdeformed") {
    spec = QDeformed{params.at("q").get<double>()};
  } else if (name == "spin") {
    spec = Spin{params.at("n_j").get<int>()};
  } else if (name == "spin_jacobi") {
    spec = SpinJacobi{params.at("n_j").get<int>(), params.at("s").get<int>()};
  } else if (name == "su11") {
    int s = 0;
    if (params.contains("s")) s = params.at("s").get<int>();
    spec = SU11Perelomov{params.at("kappa").get<double>(), s};
  } else if (name == "barut_girardello") {
    spec = BarutGirardello{params.at("kappa").get<double>()};
  } else if (name == "sgm") {
    spec = SusskindGlogowerModified{};
  } else if (name == "dfb_plane" || name == "dfb_spin") {
    std::vector<Polynomial> a_polys;
    if (params.contains("a_polys")) {
      a_polys = polys_from_json(params.at("a_polys"));
    } else {
      a_polys.push_back(Polynomial({0.0, 1.0}));  // a_1(xi) = xi, the standard case
    }
    std::optional<XSequence> xs;
    if (params.contains("x_seq")) xs = xseq_from_json(params.at("x_seq"));
    if (name == "dfb_plane") {
      spec = DFBPlane{std::move(a_polys), std::move(xs)};
    } else {
      spec = DFBSpin{params.at("n_j").get<int>(), std::move(a_polys), std::move(xs)};
    }
  } else {
    throw std::invalid_argument("family_from_json: unknown family '" + name + "'");
  }
  validate(spec);
  return spec;
}

json to_json(const quadrature::VerificationReport& report) {
  return json{{"target", report.target},
              {"residual", report.residual},
              {"threshold", report.threshold},
              {"passed", report.passed},
              {"evaluations", report.evaluations}};
}

json to_json(const fock::FockOperator& op) {
  json data = json::array();
  for (int i = 0; i < op.dim(); ++i) {
    for (int j = 0; j < op.dim(); ++j) {
      data.push_back(json::array({op.at(i, j).real(), op.at(i, j).imag()}));
    }
  }
  return json{{"rows", op.dim()}, {"cols", op.dim()}, {"hermitian", op.hermitian_flag()},
              {"data", data}};
}

json to_json(const photostats::PhotonStatistics& stats) {
  return json{{"p_n", stats.pn},
              {"tail_mass", stats.tail_mass},
              {"mean", stats.mean},
              {"variance", stats.variance},
              {"mandel_q", std::isnan(stats.mandel_q) ? json() : json(stats.mandel_q)},
              {"class", photostats::to_string(stats.cls)}};
}

fock::complexd parse_complex(const std::string& text) {
  // forms: "a", "bi", "a+bi", "a-bi", with "i"/"-i" for unit imaginary parts
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw std::invalid_argument("parse_complex: empty amplitude");

  auto parse_num = [](const std::string& part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size()) throw std::invalid_argument("parse_complex: bad number '" + part + "'");
    return v;
  };

  if (s.back() == 'i' || s.back() == 'I') {
    const std::string body = s.substr(0, s.size() - 1);
    // find the split between real and imaginary parts: the last +/- not part
    // of an exponent
    for (size_t pos = body.size(); pos-- > 1;) {
      const char c = body[pos];
      if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
        return {parse_num(body.substr(0, pos)), parse_num(body.substr(pos))};
      }
    }
    return {0.0, parse_num(body)};
  }
  return {parse_num(s), 0.0};
}

std::string format_complex(fock::complexd z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace cohstate::json_io
