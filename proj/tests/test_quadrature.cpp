// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/quadrature.hpp"

#include <doctest.h>

#include <cmath>

#include "cohstate/specfun.hpp"

using namespace cohstate;
using namespace cohstate::quadrature;
using families::FamilySpec;
using families::Polynomial;
using families::XSequence;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("unit integral") {
  const auto r = radial_integral([](double) { return 1.0; }, 1.0, QuadratureSpec{});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gamma-function oracle on the half line") {
  QuadratureSpec qs;
  for (int n = 0; n <= 30; n += 3) {
    auto f = [n](double u) { return std::exp(-u + n * std::log(std::max(u, 1e-300))); };
    const auto r = radial_integral(f, kInf, qs);
    const double want = std::exp(specfun::log_factorial(n));
    CHECK(std::abs(r.value - want) <= 1e-10 * want);
  }
}

TEST_CASE("rational map handles algebraic tails") {
  QuadratureSpec qs;
  qs.map = SemiInfiniteMap::RationalMap;
  // int_0^inf du/(1+u)^2 = 1
  const auto r = radial_integral([](double u) { return std::pow(1.0 + u, -2.0); }, kInf, qs);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("subdivision budget exhaustion raises") {
  QuadratureSpec qs;
  qs.max_subdivisions = 18;
  qs.rel_tol = 1e-14;
  auto nasty = [](double u) { return std::cos(200.0 * u); };
  CHECK_THROWS_AS(integrate(nasty, 0.0, 40.0, qs), convergence_error);
}

TEST_CASE("bessel squared over t matches 1/(2 nu)") {
  QuadratureSpec qs;
  for (int nu = 1; nu <= 10; ++nu) {
    const auto r = bessel_squared_over_t(nu, qs);
    CHECK(std::abs(r.value - 0.5 / nu) <= 1e-6 / (2.0 * nu));
  }
}

TEST_CASE("gauss-hermite nodes integrate even moments exactly") {
  std::vector<double> x, w;
  gauss_hermite(20, x, w);
  // int e^{-x^2} x^{2k} dx = Gamma(k + 1/2)
  for (int k = 0; k <= 8; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < x.size(); ++i) acc += w[i] * std::pow(x[i], 2 * k);
    CHECK(acc == doctest::Approx(std::exp(std::lgamma(k + 0.5))).epsilon(1e-12));
  }
}

TEST_CASE("moment problems: glauber") {
  QuadratureSpec qs;
  for (int n : {0, 1, 5, 12, 20, 30}) {
    const auto rep = verify_moment_problem(families::GlauberSudarshan{}, n, qs);
    CHECK(rep.passed);
    CHECK(rep.residual < 1e-10);
  }
}

TEST_CASE("moment problems: spin beta integrals") {
  QuadratureSpec qs;
  const FamilySpec spec = families::Spin{10};
  for (int n = 0; n <= 10; ++n) {
    const auto rep = verify_moment_problem(spec, n, qs);
    CHECK(rep.passed);
    CHECK(rep.residual < 1e-12);
  }
  // beyond the space dimension there is nothing to resolve
  const auto rep = verify_moment_problem(spec, 14, qs);
  CHECK(rep.passed);
  CHECK(rep.residual == 0.0);
}

TEST_CASE("moment problems: barut-girardello") {
  QuadratureSpec qs;
  const FamilySpec spec = families::BarutGirardello{1.0};
  const auto rep0 = verify_moment_problem(spec, 0, qs);
  CHECK(rep0.residual < 1e-8);
  for (int n : {1, 4, 9, 15}) {
    const auto rep = verify_moment_problem(spec, n, qs);
    CHECK(rep.passed);
    CHECK(rep.residual < 1e-7);
  }
}

TEST_CASE("moment problems: q-deformed and susskind-glogower") {
  QuadratureSpec qs;
  for (int n : {0, 1, 3, 7, 11, 15}) {
    const auto rq = verify_moment_problem(families::QDeformed{0.5}, n, qs);
    CHECK(rq.passed);
    CHECK(rq.residual < 1e-8);

    const auto rs = verify_moment_problem(families::SusskindGlogowerModified{}, n, qs);
    CHECK(rs.passed);
    CHECK(rs.residual < 1e-5);
  }
}

TEST_CASE("moment problems: unsupported families refuse") {
  QuadratureSpec qs;
  CHECK_THROWS_AS(verify_moment_problem(families::QDeformed{1.5}, 0, qs),
                  families::unsupported_family);
  CHECK_THROWS_AS(verify_moment_problem(families::HolomorphicHermite{0.5}, 0, qs),
                  families::unsupported_family);
  CHECK_THROWS_AS(
      verify_moment_problem(families::NonlinearDeformed{XSequence::table({1.0, 2.0, 3.0})}, 0,
                            qs),
      families::unsupported_family);
}

TEST_CASE("gram identities across families") {
  QuadratureSpec qs;
  struct Case {
    FamilySpec spec;
    int n_upper;
    double bound;
  };
  const std::vector<Case> cases = {
      {families::GlauberSudarshan{}, 20, 1e-8},
      {families::Spin{10}, 15, 1e-10},
      {families::SpinJacobi{10, 3}, 15, 1e-8},
      {families::SU11Perelomov{1.0, 2}, 15, 1e-6},
      {families::SU11Perelomov{0.75, 0}, 15, 1e-6},
      {families::BarutGirardello{1.0}, 15, 1e-6},
      {families::QDeformed{0.5}, 15, 1e-6},
      {families::DisplacedNumber{2}, 12, 1e-8},
      {families::DFBPlane{{Polynomial({0.0, 1.0}), Polynomial({0.3})}}, 15, 1e-6},
      {families::DFBSpin{12, {Polynomial({0.0, 1.0}), Polynomial({0.2})}}, 12, 1e-6},
  };
  for (const auto& c : cases) {
    const auto res = gram_identity(c.spec, c.n_upper, qs);
    INFO(res.report.target);
    CHECK(res.report.passed);
    CHECK(res.report.residual < c.bound);
  }
}

TEST_CASE("gram identity: susskind-glogower with w = N") {
  const auto res = gram_identity(families::SusskindGlogowerModified{}, 15, QuadratureSpec{});
  CHECK(res.report.residual < 1e-5);
}

TEST_CASE("gram identity: holomorphic hermite 2d rule") {
  const auto res = gram_identity(families::HolomorphicHermite{0.5}, 8, QuadratureSpec{});
  CHECK(res.report.passed);
  CHECK(res.report.residual < 1e-6);
  // off-diagonals are genuinely computed here
  CHECK(res.gram.size() == 9);
  CHECK(std::abs(res.gram[2][0]) < 1e-8);

  // doubled node budget should agree (oracle at doubled resolution)
  const auto res2 = gram_identity(families::HolomorphicHermite{0.5}, 10, QuadratureSpec{});
  CHECK(res2.report.residual < 1e-6);
}

TEST_CASE("gram and moment agree on the diagonal") {
  QuadratureSpec qs;
  const auto res = gram_identity(families::GlauberSudarshan{}, 10, qs);
  for (int n = 0; n <= 10; ++n) {
    const auto rep = verify_moment_problem(families::GlauberSudarshan{}, n, qs);
    CHECK(std::abs(res.gram[n][n] - (1.0 - rep.residual)) <= 1e-12 + 2.0 * rep.residual);
  }
}

TEST_CASE("tightening the budget never loosens the residual beyond its scale") {
  QuadratureSpec loose;
  loose.rel_tol = 1e-8;
  QuadratureSpec tight;
  tight.rel_tol = 1e-12;
  tight.max_subdivisions = 8000;
  for (int n : {0, 3, 9}) {
    const auto r1 = verify_moment_problem(families::BarutGirardello{1.0}, n, loose);
    const auto r2 = verify_moment_problem(families::BarutGirardello{1.0}, n, tight);
    CHECK(r2.residual <= r1.residual + 1e-8);
  }
}

TEST_CASE("report serialization fields") {
  const auto rep = verify_moment_problem(families::GlauberSudarshan{}, 2, QuadratureSpec{});
  CHECK(rep.target == "moment(glauber, n=2)");
  CHECK(rep.threshold == 1e-6);
  CHECK(rep.evaluations > 0);
}
