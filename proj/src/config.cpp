#include "lzdeg/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lzdeg/errors.hpp"

namespace lzdeg {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kTopKeys{"preset", "system", "h",     "eps",     "eps1",   "eps2",   "eps_ratio",
                                        "h_grid", "eps_rule", "paths", "fidelities", "threads", "timing", "out",
                                        "solver"};
const std::vector<std::string> kSystemKeys{"V1", "V2", "U1", "U2", "interval", "cutoff", "eps_ratio"};
const std::vector<std::string> kGridKeys{"start", "stop", "points"};
const std::vector<std::string> kRuleKeys{"kind", "value", "exponent"};
const std::vector<std::string> kSolverKeys{"residual_tol", "series_tol", "max_order",
                                           "ode_tol",      "max_points", "nodes_per_panel"};
const std::vector<std::string> kCutoffKeys{"r1", "r2"};

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& where, const std::vector<std::string>& allowed) {
  if (!obj.is_object()) throw ValidationError(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    const auto s = suggest(key, allowed);
    throw ValidationError(join(where, key), s.empty() ? fmt::format("unknown key \"{}\"", key)
                                                      : fmt::format("unknown key \"{}\" (did you mean \"{}\"?)", key, s));
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field, "expected a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number(obj.at(key), field);
}

long long integer(const json& v, const std::string& field) {
  const double d = number(v, field);
  if (d != std::floor(d) || std::abs(d) > 9e15) throw ValidationError(field, "expected an integer");
  return static_cast<long long>(d);
}

std::string string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ValidationError(field, "expected a string");
  return v.get<std::string>();
}

Polynomial polynomial(const json& v, const std::string& field) {
  if (!v.is_array()) throw ValidationError(field, "expected an array of coefficients");
  std::vector<double> c;
  for (std::size_t k = 0; k < v.size(); ++k) c.push_back(number(v[k], fmt::format("{}[{}]", field, k)));
  return Polynomial(std::move(c));
}

ComplexPolynomial complex_polynomial(const json& v, const std::string& field) {
  if (v.is_array()) return ComplexPolynomial(polynomial(v, field));
  check_keys(v, field, {"re", "im"});
  ComplexPolynomial p;
  if (v.contains("re")) p.re = polynomial(v.at("re"), field + ".re");
  if (v.contains("im")) p.im = polynomial(v.at("im"), field + ".im");
  return p;
}

json emit(const Polynomial& p) {
  json a = json::array();
  for (double c : p.coefficients()) a.push_back(c);
  return a;
}

json emit(const ComplexPolynomial& p) {
  if (p.im.is_zero()) return emit(p.re);
  return json{{"re", emit(p.re)}, {"im", emit(p.im)}};
}

json emit_optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

EpsKind parse_kind(const std::string& s, const std::string& field) {
  for (auto k : {EpsKind::Fixed, EpsKind::PowerLaw, EpsKind::FixedMu})
    if (to_string(k) == s) return k;
  const auto hint = suggest(s, {"fixed", "power", "fixed-mu"});
  throw ValidationError(field, fmt::format("unknown eps rule \"{}\"{}", s,
                                           hint.empty() ? "" : fmt::format(" (did you mean \"{}\"?)", hint)));
}

SystemTemplate parse_system(const json& v) {
  check_keys(v, "system", kSystemKeys);
  for (const char* k : {"V1", "V2", "U1", "U2"})
    if (!v.contains(k)) throw ValidationError(fmt::format("system.{}", k), "missing");
  SystemTemplate t;
  t.V1 = polynomial(v.at("V1"), "system.V1");
  t.V2 = polynomial(v.at("V2"), "system.V2");
  t.U1 = complex_polynomial(v.at("U1"), "system.U1");
  t.U2 = complex_polynomial(v.at("U2"), "system.U2");
  if (v.contains("interval")) {
    const auto& iv = v.at("interval");
    if (!iv.is_array() || iv.size() != 2) throw ValidationError("system.interval", "expected [lo, hi]");
    t.interval = {number(iv[0], "system.interval[0]"), number(iv[1], "system.interval[1]")};
  }
  if (v.contains("cutoff")) {
    const auto& c = v.at("cutoff");
    check_keys(c, "system.cutoff", kCutoffKeys);
    if (c.contains("r1")) t.cutoff.r1 = number(c.at("r1"), "system.cutoff.r1");
    if (c.contains("r2")) t.cutoff.r2 = number(c.at("r2"), "system.cutoff.r2");
  }
  if (v.contains("eps_ratio")) t.eps_ratio = number(v.at("eps_ratio"), "system.eps_ratio");
  return t;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string path_name(SolverPath p) { return p == SolverPath::NeumannSeries ? "series" : "ode"; }
std::string fidelity_name(Fidelity f) { return f == Fidelity::LeadingClosed ? "closed" : "integral"; }

SolverPath parse_path(const std::string& s) {
  if (s == "series") return SolverPath::NeumannSeries;
  if (s == "ode") return SolverPath::DirectODE;
  throw ValidationError("paths", fmt::format("unknown path \"{}\" (series or ode)", s));
}

Fidelity parse_fidelity(const std::string& s) {
  if (s == "closed") return Fidelity::LeadingClosed;
  if (s == "integral") return Fidelity::OscIntegral;
  throw ValidationError("fidelities", fmt::format("unknown fidelity \"{}\" (closed or integral)", s));
}

std::string suggest(const std::string& key, const std::vector<std::string>& candidates) {
  auto distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  };
  auto prefix = [](const std::string& a, const std::string& b) {
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
    return n;
  };

  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const auto d = distance(key, c);
    if (d < best_d) best_d = d, best = c;
  }
  if (!best.empty() && best_d <= std::max<std::size_t>(2, key.size() / 3)) return best;

  // fall back to a shared stem, e.g. "epsilonn" -> "eps"
  best.clear();
  std::size_t best_p = 2;
  for (const auto& c : candidates) {
    const auto p = prefix(key, c);
    if (p > best_p || (p == best_p && !best.empty() && c.size() < best.size())) best_p = p, best = c;
  }
  return best;
}

CliConfig parse_config(const std::string& text, std::string source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    if (const auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(fmt::format("line {}, column {}: {}", line, col, msg));
  }
  check_keys(doc, "", kTopKeys);

  CliConfig c;
  c.source = std::move(source);
  auto& s = c.sweep;
  if (doc.contains("preset")) s.preset = string(doc.at("preset"), "preset");
  if (doc.contains("system") && !doc.at("system").is_null()) s.system = parse_system(doc.at("system"));
  c.h = optional_number(doc, "h", "h");
  c.eps = optional_number(doc, "eps", "eps");
  c.eps1 = optional_number(doc, "eps1", "eps1");
  c.eps2 = optional_number(doc, "eps2", "eps2");
  s.eps_ratio = optional_number(doc, "eps_ratio", "eps_ratio");

  if (doc.contains("h_grid")) {
    const auto& g = doc.at("h_grid");
    check_keys(g, "h_grid", kGridKeys);
    if (g.contains("start")) s.h_grid.start = number(g.at("start"), "h_grid.start");
    if (g.contains("stop")) s.h_grid.stop = number(g.at("stop"), "h_grid.stop");
    if (g.contains("points")) s.h_grid.points = static_cast<int>(integer(g.at("points"), "h_grid.points"));
  }
  if (doc.contains("eps_rule")) {
    const auto& r = doc.at("eps_rule");
    check_keys(r, "eps_rule", kRuleKeys);
    if (r.contains("kind")) s.eps_rule.kind = parse_kind(string(r.at("kind"), "eps_rule.kind"), "eps_rule.kind");
    if (r.contains("value")) s.eps_rule.value = number(r.at("value"), "eps_rule.value");
    if (r.contains("exponent")) s.eps_rule.exponent = number(r.at("exponent"), "eps_rule.exponent");
  }
  if (doc.contains("paths")) {
    const auto& a = doc.at("paths");
    if (!a.is_array()) throw ValidationError("paths", "expected an array");
    s.paths.clear();
    for (const auto& p : a) s.paths.push_back(parse_path(string(p, "paths")));
  }
  if (doc.contains("fidelities")) {
    const auto& a = doc.at("fidelities");
    if (!a.is_array()) throw ValidationError("fidelities", "expected an array");
    s.fidelities.clear();
    for (const auto& f : a) s.fidelities.push_back(parse_fidelity(string(f, "fidelities")));
  }
  if (doc.contains("threads")) s.threads = static_cast<int>(integer(doc.at("threads"), "threads"));
  if (doc.contains("timing")) {
    if (!doc.at("timing").is_boolean()) throw ValidationError("timing", "expected true or false");
    s.timing = doc.at("timing").get<bool>();
  }
  if (doc.contains("out")) s.out = string(doc.at("out"), "out");
  if (doc.contains("solver")) {
    const auto& o = doc.at("solver");
    check_keys(o, "solver", kSolverKeys);
    auto& so = s.solver;
    if (o.contains("residual_tol")) so.residual_tol = number(o.at("residual_tol"), "solver.residual_tol");
    if (o.contains("series_tol")) so.series_tol = number(o.at("series_tol"), "solver.series_tol");
    if (o.contains("max_order")) so.max_order = static_cast<int>(integer(o.at("max_order"), "solver.max_order"));
    if (o.contains("ode_tol")) so.ode_tol = number(o.at("ode_tol"), "solver.ode_tol");
    if (o.contains("max_points")) {
      const auto n = integer(o.at("max_points"), "solver.max_points");
      if (n <= 0) throw ValidationError("solver.max_points", "must be positive");
      so.max_points = static_cast<std::size_t>(n);
    }
    if (o.contains("nodes_per_panel"))
      so.nodes_per_panel = static_cast<int>(integer(o.at("nodes_per_panel"), "solver.nodes_per_panel"));
  }
  c.validate();
  return c;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void CliConfig::validate() const {
  const auto& s = sweep;
  if (h && !(*h > 0.0 && *h < 1.0)) throw ValidationError("h", "must lie in (0, 1)");
  for (auto [name, v] : {std::pair{"eps", eps}, {"eps1", eps1}, {"eps2", eps2}})
    if (v && !(std::isfinite(*v) && *v >= 0.0)) throw ValidationError(name, "must be finite and >= 0");
  if (eps && (eps1 || eps2)) throw ValidationError("eps", "give either eps or eps1 and eps2");
  if (eps1.has_value() != eps2.has_value()) throw ValidationError(eps1 ? "eps2" : "eps1", "eps1 and eps2 go together");
  if (s.eps_ratio && !positive_finite(*s.eps_ratio)) throw ValidationError("eps_ratio", "must be positive");

  if (!s.system) {
    const auto& all = presets();
    const bool known = std::any_of(all.begin(), all.end(), [&](const PresetInfo& p) { return p.name == s.preset; });
    if (!known) {
      std::vector<std::string> names;
      for (const auto& p : all) names.push_back(p.name);
      const auto hint = suggest(s.preset, names);
      throw ValidationError("preset", fmt::format("unknown preset \"{}\"{}", s.preset,
                                                  hint.empty() ? "" : fmt::format(" (did you mean \"{}\"?)", hint)));
    }
  } else {
    const auto& t = *s.system;
    if (!positive_finite(t.eps_ratio)) throw ValidationError("system.eps_ratio", "must be positive");
    try {
      t.cutoff.validate(t.interval);
      t.contact_order();
    } catch (const Error& e) {
      throw ValidationError("system", fmt::format("{}: {}", e.kind(), e.what()));
    }
  }

  if (!positive_finite(s.h_grid.start) || !(s.h_grid.start < 1.0)) throw ValidationError("h_grid.start", "must lie in (0, 1)");
  if (!positive_finite(s.h_grid.stop) || !(s.h_grid.stop < 1.0)) throw ValidationError("h_grid.stop", "must lie in (0, 1)");
  if (s.h_grid.points < 1) throw ValidationError("h_grid.points", "must be >= 1");
  if (s.h_grid.points > 1 && !(s.h_grid.stop < s.h_grid.start)) throw ValidationError("h_grid.stop", "must be below start");
  if (!(std::isfinite(s.eps_rule.value) && s.eps_rule.value >= 0.0)) throw ValidationError("eps_rule.value", "must be >= 0");
  if (!std::isfinite(s.eps_rule.exponent)) throw ValidationError("eps_rule.exponent", "must be finite");
  if (s.paths.empty()) throw ValidationError("paths", "empty");
  if (s.fidelities.empty()) throw ValidationError("fidelities", "empty");
  if (s.threads < 0) throw ValidationError("threads", "must be >= 0");
  const auto& o = s.solver;
  if (!positive_finite(o.residual_tol)) throw ValidationError("solver.residual_tol", "must be positive");
  if (!positive_finite(o.series_tol)) throw ValidationError("solver.series_tol", "must be positive");
  if (!positive_finite(o.ode_tol)) throw ValidationError("solver.ode_tol", "must be positive");
  if (o.max_order < 1) throw ValidationError("solver.max_order", "must be >= 1");
  if (o.nodes_per_panel < 2 || o.nodes_per_panel > 64) throw ValidationError("solver.nodes_per_panel", "must lie in [2, 64]");
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ValidationError("config", e.what());
  }
}

SystemSpec CliConfig::point() const {
  const auto t = sweep.system_template();
  const double hh = h.value_or(sweep.h_grid.start);
  if (eps1) return t.instantiate(*eps1, *eps2, hh);
  if (eps) return t.instantiate(*eps, hh);
  return t.instantiate(sweep.eps_rule.eps_tilde(hh, t.contact_order()), hh);
}

std::string emit_config(const CliConfig& c) {
  const auto& s = c.sweep;
  json doc;
  doc["preset"] = s.preset;
  if (s.system) {
    const auto& t = *s.system;
    doc["system"] = json{{"V1", emit(t.V1)},
                         {"V2", emit(t.V2)},
                         {"U1", emit(t.U1)},
                         {"U2", emit(t.U2)},
                         {"interval", json::array({t.interval.lo, t.interval.hi})},
                         {"cutoff", json{{"r1", t.cutoff.r1}, {"r2", t.cutoff.r2}}},
                         {"eps_ratio", t.eps_ratio}};
  }
  doc["h"] = emit_optional(c.h);
  doc["eps"] = emit_optional(c.eps);
  doc["eps1"] = emit_optional(c.eps1);
  doc["eps2"] = emit_optional(c.eps2);
  doc["eps_ratio"] = emit_optional(s.eps_ratio);
  doc["h_grid"] = json{{"start", s.h_grid.start}, {"stop", s.h_grid.stop}, {"points", s.h_grid.points}};
  doc["eps_rule"] = json{{"kind", to_string(s.eps_rule.kind)}, {"value", s.eps_rule.value}, {"exponent", s.eps_rule.exponent}};
  doc["paths"] = json::array();
  for (auto p : s.paths) doc["paths"].push_back(path_name(p));
  doc["fidelities"] = json::array();
  for (auto f : s.fidelities) doc["fidelities"].push_back(fidelity_name(f));
  doc["threads"] = s.threads;
  doc["timing"] = s.timing;
  doc["out"] = s.out;
  doc["solver"] = json{{"residual_tol", s.solver.residual_tol}, {"series_tol", s.solver.series_tol},
                       {"max_order", s.solver.max_order},       {"ode_tol", s.solver.ode_tol},
                       {"max_points", s.solver.max_points},     {"nodes_per_panel", s.solver.nodes_per_panel}};
  return doc.dump(2) + "\n";
}

}  // namespace lzdeg
