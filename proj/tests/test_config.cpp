#include "doctest.h"

#include "lzdeg/config.hpp"
#include "lzdeg/errors.hpp"

using namespace lzdeg;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal preset document") {
  const auto c = parse_config(R"({"preset":"tangent-m2","h":1e-3,"eps":5e-4})");
  CHECK(c.sweep.preset == "tangent-m2");
  CHECK(*c.h == 1e-3);
  CHECK(*c.eps == 5e-4);
  CHECK(c.sweep.paths == std::vector<SolverPath>{SolverPath::NeumannSeries});
  const auto spec = c.point();
  CHECK(spec.h == 1e-3);
  CHECK(spec.eps1 == doctest::Approx(5e-4));
  CHECK(spec.m() == 2);
}

TEST_CASE("defaults fill a point from the eps rule") {
  const auto c = parse_config("{}");
  const auto spec = c.point();
  CHECK(spec.h == c.sweep.h_grid.start);
  CHECK(scale_params(spec).mu_m() == doctest::Approx(0.05));
}

TEST_CASE("validation errors name the field") {
  CHECK(field_of(R"({"h": -1e-3})") == "h");
  CHECK(field_of(R"({"h": "small"})") == "h");
  CHECK(field_of(R"({"eps": 1e-3, "eps1": 1e-3, "eps2": 1e-3})") == "eps");
  CHECK(field_of(R"({"eps1": 1e-3})") == "eps2");
  CHECK(field_of(R"({"h_grid": {"start": 1e-3, "stop": 1e-2, "points": 3}})") == "h_grid.stop");
  CHECK(field_of(R"({"h_grid": {"points": 2.5}})") == "h_grid.points");
  CHECK(field_of(R"({"paths": ["rk4"]})") == "paths");
  CHECK(field_of(R"({"threads": -2})") == "threads");
  CHECK(field_of(R"({"solver": {"max_order": 0}})") == "solver.max_order");
  CHECK(field_of(R"({"system": {"V1": [0, 0, 1], "V2": [0, 0, 1], "U1": [1], "U2": [1]}})") == "system");
  CHECK(field_of(R"({"system": {"V1": [0, 1], "V2": [0, -1], "U1": [1]}})") == "system.U2");
}

TEST_CASE("unknown keys are rejected with a suggestion") {
  try {
    parse_config(R"({"preset": "tangent-m2", "epsilonn": 1e-3})");
    FAIL("accepted an unknown key");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "epsilonn");
    CHECK(std::string(e.what()).find("did you mean \"eps\"") != std::string::npos);
  }
  try {
    parse_config(R"({"h_grid": {"strat": 1e-2}})");
    FAIL("accepted an unknown key");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "h_grid.strat");
    CHECK(std::string(e.what()).find("\"start\"") != std::string::npos);
  }
  try {
    parse_config(R"({"preset": "tangent-m5"})");
    FAIL("accepted an unknown preset");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "preset");
    CHECK(std::string(e.what()).find("did you mean") != std::string::npos);
  }
  CHECK(suggest("zzzz", {"preset", "h"}).empty());
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_config("{\n  \"h\": 1e-3,\n  \"eps\": ,\n}");
    FAIL("parsed malformed JSON");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3, column 10") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[1, 2]"), ValidationError);
  CHECK_THROWS_AS(parse_config(""), ParseError);
}

TEST_CASE("round trip") {
  SUBCASE("defaults") {
    const CliConfig c;
    CHECK(parse_config(emit_config(c)) == c);
  }
  SUBCASE("everything set") {
    CliConfig c;
    c.h = 3.1622776601683795e-3;
    c.eps1 = 1.0 / 3.0;
    c.eps2 = 0.1;
    c.sweep.eps_ratio = 2.0;
    c.sweep.h_grid = {1e-2, 1e-4, 7};
    c.sweep.eps_rule = {EpsKind::PowerLaw, 0.7, 0.81};
    c.sweep.paths = {SolverPath::DirectODE, SolverPath::NeumannSeries};
    c.sweep.fidelities = {Fidelity::LeadingClosed, Fidelity::OscIntegral};
    c.sweep.threads = 3;
    c.sweep.timing = true;
    c.sweep.out = "run.csv";
    c.sweep.solver.residual_tol = 1e-9;
    c.sweep.solver.max_points = 123456;
    SystemTemplate t = preset("tangent-m2");
    t.U1 = ComplexPolynomial(Polynomial{1.0, 0.1}, Polynomial{0.0, 0.25});
    t.U2 = ComplexPolynomial(Polynomial{1.0, 0.1}, Polynomial{0.0, -0.25});
    t.cutoff = {0.25, 0.6};
    c.sweep.system = t;
    c.validate();
    const auto text = emit_config(c);
    CHECK(parse_config(text) == c);
    CHECK(emit_config(parse_config(text)) == text);
  }
}
