#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lzdeg/errors.hpp"
#include "lzdeg/harness.hpp"
#include "lzdeg/oscquad.hpp"
#include "lzdeg/statphase.hpp"

using namespace lzdeg;

TEST_CASE("presets") {
  for (const auto& p : presets()) {
    const auto t = preset(p.name);
    const int m = t.contact_order();
    CHECK(m >= 1);
    const double h = p.coupled_only ? 1e-2 : 1e-3;
    CHECK_NOTHROW(t.instantiate(1e-4, h));
  }
  CHECK(preset("tangent-m3").contact_order() == 3);
  CHECK(preset("vanishing-coupling").instantiate(1e-4, 1e-3).n1 == 1);
  const auto nh = preset("nonhermitian").instantiate(1e-3, 1e-3);
  CHECK(nh.eps1 / nh.eps2 == doctest::Approx(2.0));
  CHECK(std::sqrt(nh.eps1 * nh.eps2) == doctest::Approx(1e-3));
  CHECK_THROWS_AS(preset("tangent-m4"), ConfigError);
}

TEST_CASE("hermite conventions") {
  CHECK(hermite_convention(preset("tangent-m2").instantiate(1e-4, 1e-3)) == Convention::Hermite1);
  CHECK(hermite_convention(preset("hermite2-m2").instantiate(1e-4, 1e-3)) == Convention::Hermite2);
  CHECK(!hermite_convention(preset("nonhermitian").instantiate(1e-4, 1e-3)));
  auto t = preset("tangent-m2");
  t.U2 = Polynomial{1, 1};
  CHECK(std::isnan(structural_unitarity(t.instantiate(1e-4, 1e-3), Matrix2{})));
}

TEST_CASE("h grid and eps rules") {
  const auto v = HGrid{1e-2, 1e-4, 3}.values();
  REQUIRE(v.size() == 3);
  CHECK(v[1] == doctest::Approx(1e-3));
  CHECK(v[2] == 1e-4);
  CHECK(HGrid{1e-3, 1e-4, 1}.values() == std::vector<double>{1e-3});

  CHECK(EpsRule{EpsKind::Fixed, 2e-3, 0}.eps_tilde(1e-3, 2) == 2e-3);
  CHECK(EpsRule{EpsKind::PowerLaw, 2.0, 0.8}.eps_tilde(1e-2, 2) == doctest::Approx(2.0 * std::pow(1e-2, 0.8)));
  // mu_2 = eps~ h^{-2/3}
  CHECK(EpsRule{EpsKind::FixedMu, 0.05, 0}.eps_tilde(1e-3, 2) == doctest::Approx(5e-4));
}

TEST_CASE("sweep config validation") {
  SweepConfig c;
  c.h_grid.points = 0;
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
  c = {};
  c.h_grid = {1e-3, 1e-2, 2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.h_grid = {1.5, 1e-2, 2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.paths.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.preset = "nope";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.eps_ratio = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = {};
  c.eps_rule = {EpsKind::PowerLaw, 1.0, 0.8};
  REQUIRE(c.notes().size() == 1);
  CHECK(c.notes().front().find("NonCoupled tail") != std::string::npos);
  c.eps_rule.exponent = 0.5;
  CHECK(c.notes().front().find("no NonCoupled tail") != std::string::npos);
}

TEST_CASE("one-point sweep") {
  SweepConfig c;
  c.h_grid = {1e-3, 1e-3, 1};
  const auto r = run_sweep(c);
  REQUIRE(r.size() == 1);
  CHECK(!r[0].failed());
  CHECK(r[0].det_dev <= 1e-8);
  CHECK(r[0].regime == "NonCoupled");
  CHECK(r[0].mu_m == doctest::Approx(0.05));
  CHECK(r[0].unit_dev < 1e-6);
}

TEST_CASE("fixed mu sweep follows -i mu omega~(h)") {
  SweepConfig c;
  c.h_grid = {1e-2, 1e-3, 4};
  c.fidelities = {Fidelity::OscIntegral, Fidelity::LeadingClosed};
  const auto r = run_sweep(c);
  REQUIRE(r.size() == 4);
  const Polynomial Q{0, 0, 1};
  for (const auto& rec : r) {
    const auto w = omega_tilde(2, 0, Polynomial{1.0}, Q, rec.h, CutoffSpec{});
    // O(mu^2) relative, constant about 1.8 after dividing by |omega~|
    CHECK(std::abs(rec.T(0, 1)) == doctest::Approx(0.05 * std::abs(w.value)).epsilon(0.01));
    REQUIRE(rec.predictions.size() == 2);
    CHECK(rec.predictions[0].fidelity == Fidelity::OscIntegral);
    CHECK(rec.predictions[0].rel_err_t12 < 0.01);
    // closed form also misses the cutoff transition, 1.4% at h = 1e-2
    CHECK(rec.predictions[1].rel_err_t12 < 0.02);
  }
  for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k].h > r[k - 1].h);
}

TEST_CASE("failed points are recorded") {
  SweepConfig c;
  c.h_grid = {1e-3, 1e-3, 1};
  c.solver.max_points = 100;
  const auto r = run_sweep(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].failed());
  CHECK(r[0].regime == "error:GridTooCoarse");
  CHECK(std::isnan(r[0].det_dev));
  const auto csv = to_csv(r);
  CHECK(csv.find("error:GridTooCoarse") != std::string::npos);
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("coupled points skip the predictor and still solve") {
  SweepConfig c;
  c.preset = "lz-wide";
  c.h_grid = {1e-2, 1e-2, 1};
  c.eps_rule = {EpsKind::Fixed, std::sqrt(10.0 * 1e-2), 0};
  c.paths = {SolverPath::DirectODE, SolverPath::NeumannSeries};
  const auto r = run_sweep(c);
  REQUIRE(r.size() == 2);
  CHECK(r[0].path == SolverPath::NeumannSeries);
  CHECK(r[0].regime == "error:RegimeViolation");
  CHECK(r[1].regime == "Coupled");
  CHECK(r[1].predictions.empty());
  CHECK(r[1].det_dev < 1e-8);
}

TEST_CASE("csv schema and determinism") {
  SweepConfig c;
  c.h_grid = {1e-2, 1e-3, 3};
  c.paths = {SolverPath::DirectODE, SolverPath::NeumannSeries};
  c.threads = 1;
  const auto a = to_csv(run_sweep(c));
  c.threads = 4;
  const auto b = to_csv(run_sweep(c));
  CHECK(a == b);

  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "h,eps1,eps2,m,n1,n2,mu_m,regime,path,re_t11,im_t11,re_t12,im_t12,re_t21,im_t21,re_t22,im_t22,"
        "re_pred_t12,im_pred_t12,re_pred_t21,im_pred_t21,det_dev,const_dev,unit_dev,residual,wall_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 25);
  }
  CHECK(rows == 6);
  // sorted by h, then path
  std::istringstream again(a);
  std::getline(again, line);
  std::getline(again, line);
  CHECK(line.rfind("0.001,", 0) == 0);
  CHECK(line.find(",neumann,") != std::string::npos);
}

TEST_CASE("fit_convergence") {
  std::vector<std::pair<double, double>> p;
  for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) p.emplace_back(h, h);
  CHECK(fit_convergence(p).slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_convergence(p).stderr_slope < 1e-12);

  p.clear();
  for (double h : {1e-1, 3e-2, 1e-2, 3e-3}) p.emplace_back(h, 3.0 * std::cbrt(h));
  const auto f = fit_convergence(p);
  CHECK(std::abs(f.slope - 1.0 / 3.0) < 1e-3);
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));

  // omega~_2(h) -> omega~0_2 for generic m = 2 data
  const Polynomial Q{0, 0, 1};
  const ComplexPolynomial W(Polynomial{1, 1});
  const Complex w0 = omega_tilde0(2, 0, W, Q);
  p.clear();
  for (double e10 : {-2.0, -2.5, -3.0, -3.5, -4.0}) {
    const double h = std::pow(10.0, e10);
    p.emplace_back(h, std::abs(omega_tilde(2, 0, W, Q, h, CutoffSpec{}, {-1, 1}, {1e-12}).value - w0));
  }
  CHECK(std::abs(fit_convergence(p).slope - 1.0 / 3.0) < 0.07);

  CHECK_THROWS_AS(fit_convergence({{1e-2, 1.0}, {1e-3, 0.5}}), InsufficientData);
  CHECK_THROWS_AS(fit_convergence({{1e-2, 1.0}, {1e-3, 0.0}, {1e-4, 0.1}}), InsufficientData);
}

TEST_CASE("verify suite") {
  SUBCASE("default presets pass") {
    const auto r = verify_suite({});
    std::ostringstream os;
    print_report(os, r);
    INFO(os.str());
    CHECK(r.all_passed());
    CHECK(r.checks.size() > 200);
  }
  SUBCASE("tightened tolerances fail without crashing") {
    VerifyConfig c;
    c.presets = {"tangent-m2"};
    c.tolerance_scale = 0.01;
    const auto r = verify_suite(c);
    CHECK(r.failures() > 0);
    CHECK(r.failures() < r.checks.size());
    std::ostringstream os;
    print_report(os, r);
    CHECK(os.str().find("FAIL") != std::string::npos);
  }
  SUBCASE("coupled point notes the skipped predictor") {
    VerifyConfig c;
    c.presets = {"lz-wide"};
    const auto r = verify_suite(c);
    bool noted = false;
    for (const auto& k : r.checks)
      if (k.skipped && k.name == "predictor" && k.note.find("RegimeViolation") != std::string::npos) noted = true;
    CHECK(noted);
    CHECK(r.all_passed());
  }
}
