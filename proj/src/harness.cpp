#include "lzdeg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "lzdeg/errors.hpp"
#include "lzdeg/oscquad.hpp"
#include "lzdeg/statphase.hpp"

namespace lzdeg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SystemTemplate quadratic(ComplexPolynomial U1, ComplexPolynomial U2, double ratio = 1.0) {
  SystemTemplate t;
  t.V1 = Polynomial{0, 0, 0.5};
  t.V2 = Polynomial{0, 0, -0.5};
  t.U1 = std::move(U1);
  t.U2 = std::move(U2);
  t.eps_ratio = ratio;
  return t;
}

}  // namespace

SystemSpec SystemTemplate::instantiate(double eps_tilde, double h) const {
  const double r = std::sqrt(eps_ratio);
  return instantiate(eps_tilde * r, eps_tilde / r, h);
}

SystemSpec SystemTemplate::instantiate(double eps1, double eps2, double h) const {
  return build_system(V1, V2, U1, U2, eps1, eps2, h, interval, cutoff);
}

int SystemTemplate::contact_order() const {
  const auto m = vanishing_order(V1 - V2);
  if (!m) throw ConfigError("V1 - V2 vanishes identically");
  return *m;
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list{
      {"lz-linear", "m = 1, V = +-x, U = 1", false},
      {"tangent-m2", "m = 2, V = +-x^2/2, U = 1", false},
      {"tangent-m3", "m = 3, V = +-x^3/2, U = 1", false},
      {"vanishing-coupling", "m = 2, V = +-x^2/2, U1 = U2 = x (n = 1)", false},
      {"nonhermitian", "m = 2, V = +-x^2/2, U = 1, eps1 = 2 eps2", false},
      {"hermite2-m2", "m = 2, V = +-x^2/2, U1 = 1, U2 = -1", false},
      {"lz-wide", "m = 1, V = +-x on [-8, 8], coupling switched off at |x| in (4, 7)", true},
  };
  return list;
}

SystemTemplate preset(const std::string& name) {
  if (name == "lz-linear" || name == "lz-wide") {
    SystemTemplate t;
    t.V1 = Polynomial{0, 1};
    t.V2 = Polynomial{0, -1};
    t.U1 = Polynomial{1.0};
    t.U2 = Polynomial{1.0};
    if (name == "lz-wide") {
      t.interval = {-8.0, 8.0};
      t.cutoff = {4.0, 7.0};
    }
    return t;
  }
  if (name == "tangent-m2") return quadratic(Polynomial{1.0}, Polynomial{1.0});
  if (name == "tangent-m3") {
    auto t = quadratic(Polynomial{1.0}, Polynomial{1.0});
    t.V1 = Polynomial{0, 0, 0, 0.5};
    t.V2 = Polynomial{0, 0, 0, -0.5};
    return t;
  }
  if (name == "vanishing-coupling") return quadratic(Polynomial{0, 1}, Polynomial{0, 1});
  if (name == "nonhermitian") return quadratic(Polynomial{1.0}, Polynomial{1.0}, 2.0);
  if (name == "hermite2-m2") return quadratic(Polynomial{1.0}, Polynomial{-1.0});
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

std::optional<Convention> hermite_convention(const SystemSpec& spec) {
  if (spec.eps1 != spec.eps2) return std::nullopt;
  if (spec.U1 == spec.U2.conj()) return Convention::Hermite1;
  if (spec.U1 == -spec.U2.conj()) return Convention::Hermite2;
  return std::nullopt;
}

double structural_unitarity(const SystemSpec& spec, const Matrix2& T) {
  try {
    if (auto c = hermite_convention(spec)) return unitarity_deviation(scattering_matrix(T, *c));
    if (spec.U1 == spec.U2.conj() && spec.eps1 > 0.0 && spec.eps2 > 0.0)
      return unitarity_deviation(rescale_bases(T, spec.eps1, spec.eps2));
  } catch (const SingularT22&) {
  }
  return kNaN;
}

std::vector<double> HGrid::values() const {
  std::vector<double> v;
  if (points <= 0) return v;
  if (points == 1) return {start};
  for (int k = 0; k < points; ++k)
    v.push_back(start * std::pow(stop / start, static_cast<double>(k) / (points - 1)));
  v.back() = stop;
  return v;
}

std::string to_string(EpsKind k) {
  switch (k) {
    case EpsKind::Fixed: return "fixed";
    case EpsKind::PowerLaw: return "power";
    default: return "fixed-mu";
  }
}

double EpsRule::eps_tilde(double h, int m) const {
  switch (kind) {
    case EpsKind::Fixed: return value;
    case EpsKind::PowerLaw: return value * std::pow(h, exponent);
    default: return value * std::pow(h, static_cast<double>(m) / (m + 1.0));
  }
}

SystemTemplate SweepConfig::system_template() const {
  auto t = system ? *system : lzdeg::preset(preset);
  if (eps_ratio) t.eps_ratio = *eps_ratio;
  return t;
}

void SweepConfig::validate() const {
  const auto t = system_template();
  t.contact_order();
  if (h_grid.points < 1) throw ConfigError("h grid is empty");
  const auto hs = h_grid.values();
  for (double h : hs)
    if (!(h > 0.0 && h < 1.0)) throw ConfigError(fmt::format("h = {} outside (0, 1)", h));
  for (std::size_t k = 1; k < hs.size(); ++k)
    if (!(hs[k] < hs[k - 1])) throw ConfigError("h grid must be strictly decreasing");
  if (!(eps_rule.value >= 0.0) || !std::isfinite(eps_rule.value)) throw ConfigError("eps rule value must be >= 0");
  if (!(t.eps_ratio > 0.0)) throw ConfigError("eps ratio must be positive");
  if (paths.empty()) throw ConfigError("no solver path selected");
  if (fidelities.empty()) throw ConfigError("no predictor fidelity selected");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!(solver.residual_tol > 0.0)) throw ConfigError("solver tolerance must be positive");
}

std::vector<std::string> SweepConfig::notes() const {
  std::vector<std::string> out;
  const int m = system_template().contact_order();
  const double crit = m / (m + 1.0);
  if (eps_rule.kind == EpsKind::PowerLaw) {
    if (eps_rule.exponent > crit)
      out.push_back(fmt::format("eps = c h^{} with {} > m/(m+1) = {:.4g}: mu_m -> 0, NonCoupled tail",
                                eps_rule.exponent, eps_rule.exponent, crit));
    else
      out.push_back(fmt::format("eps = c h^{} with {} <= m/(m+1) = {:.4g}: no NonCoupled tail",
                                eps_rule.exponent, eps_rule.exponent, crit));
  }
  return out;
}

RunRecord run_point(const SystemSpec& spec, SolverPath path, const std::vector<Fidelity>& fidelities,
                    const SolverOptions& opts, bool timing) {
  RunRecord r;
  r.h = spec.h;
  r.eps1 = spec.eps1;
  r.eps2 = spec.eps2;
  r.m = spec.m();
  r.n1 = spec.n1;
  r.n2 = spec.n2;
  const auto sp = scale_params(spec);
  r.mu_m = sp.mu_m();
  r.mu_mn = sp.mu_m_ntilde();
  const Regime regime = classify_regime(spec);
  r.regime = to_string(regime);
  r.path = path;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto tr = transfer_matrix(spec, path, opts);
    r.T = tr.T.entries;
    r.det_dev = tr.T.det_deviation;
    r.const_dev = tr.T.constancy_deviation;
    r.residual = tr.residual;
    r.unit_dev = structural_unitarity(spec, tr.T);
    if (regime != Regime::Coupled) {
      for (auto f : fidelities) {
        const auto p = predicted_T(spec, f);
        PredictedEntries e;
        e.fidelity = f;
        e.t12 = p.T(0, 1);
        e.t21 = p.T(1, 0);
        e.abs_err_t12 = std::abs(r.T(0, 1) - e.t12);
        e.rel_err_t12 = std::abs(e.t12) < 1e-14 ? kNaN : e.abs_err_t12 / std::abs(e.t12);
        r.predictions.push_back(e);
      }
    }
  } catch (const Error& e) {
    r.error = e.kind() + ": " + e.what();
  } catch (const std::exception& e) {
    r.error = std::string("Internal: ") + e.what();
  }
  if (r.failed()) {
    r.regime = "error:" + r.error.substr(0, r.error.find(':'));
    r.T = Eigen::Matrix2cd::Constant(Complex(kNaN, kNaN));
    r.predictions.clear();
    r.det_dev = r.const_dev = r.unit_dev = r.residual = kNaN;
  }
  if (timing)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<RunRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto t = cfg.system_template();
  const int m = t.contact_order();

  struct Task {
    SystemSpec spec;
    SolverPath path;
  };
  std::vector<Task> tasks;
  for (double h : cfg.h_grid.values()) {
    SystemSpec spec;
    try {
      spec = t.instantiate(cfg.eps_rule.eps_tilde(h, m), h);
    } catch (const Error& e) {
      throw ConfigError(fmt::format("cannot build the system at h = {}: {}", h, e.what()));
    }
    for (auto p : cfg.paths) tasks.push_back({spec, p});
  }

  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
      records[i] = run_point(tasks[i].spec, tasks[i].path, cfg.fidelities, cfg.solver, cfg.timing);
  };
  std::size_t n = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                   : static_cast<std::size_t>(cfg.threads);
  n = std::min(n, std::max<std::size_t>(tasks.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
  }

  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.h, a.eps1, a.eps2, a.path) < std::tie(b.h, b.eps1, b.eps2, b.path);
  });
  return records;
}

const char* const kCsvHeader =
    "h,eps1,eps2,m,n1,n2,mu_m,regime,path,re_t11,im_t11,re_t12,im_t12,re_t21,im_t21,re_t22,im_t22,"
    "re_pred_t12,im_pred_t12,re_pred_t21,im_pred_t21,det_dev,const_dev,unit_dev,residual,wall_ms";

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    std::string line = fmt::format("{:.17g},{:.17g},{:.17g},{},{},{},{:.17g},{},{}", r.h, r.eps1, r.eps2, r.m, r.n1,
                                   r.n2, r.mu_m, r.regime, to_string(r.path));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) line += fmt::format(",{:.17g},{:.17g}", r.T(i, j).real(), r.T(i, j).imag());
    const Complex p12 = r.predictions.empty() ? Complex(kNaN, kNaN) : r.predictions.front().t12;
    const Complex p21 = r.predictions.empty() ? Complex(kNaN, kNaN) : r.predictions.front().t21;
    line += fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g}", p12.real(), p12.imag(), p21.real(), p21.imag());
    line += fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g},{:.6f}", r.det_dev, r.const_dev, r.unit_dev, r.residual,
                        r.wall_ms);
    os << line << '\n';
  }
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  write_csv(os, records);
  return os.str();
}

FitResult fit_convergence(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw InsufficientData(fmt::format("need >= 3 (h, err) pairs, got {}", pairs.size()));
  std::vector<double> x, y;
  for (const auto& [h, e] : pairs) {
    if (!(h > 0.0) || !(e > 0.0)) throw InsufficientData("h and err must be positive");
    x.push_back(std::log(h));
    y.push_back(std::log(e));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) mx += x[k], my += y[k];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw InsufficientData("all h values coincide");
  FitResult f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.intercept + f.slope * x[k]);
    ss += r * r;
  }
  f.stderr_slope = std::sqrt(ss / (n - 2.0) / sxx);
  f.confidence = 2.0 * f.stderr_slope;
  return f;
}

bool VerifyReport::all_passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.skipped && !c.passed; }));
}

namespace {

class Collector {
 public:
  Collector(VerifyReport& r, double scale) : r_(r), scale_(scale) {}

  void check(const std::string& preset, const std::string& name, double measured, double threshold,
             std::string note = {}) {
    CheckResult c{name, preset, measured, threshold * scale_, false, false, std::move(note)};
    c.passed = measured <= c.threshold;  // NaN fails
    r_.checks.push_back(std::move(c));
  }
  void skip(const std::string& preset, const std::string& name, std::string note) {
    r_.checks.push_back({name, preset, kNaN, kNaN, false, true, std::move(note)});
  }
  void error(const std::string& preset, const std::string& name, const std::exception& e) {
    const auto* le = dynamic_cast<const Error*>(&e);
    r_.checks.push_back({name, preset, kNaN, kNaN, false, false,
                         (le ? le->kind() + ": " : std::string("error: ")) + e.what()});
  }

 private:
  VerifyReport& r_;
  double scale_;
};

double left_basis_offset(const Solution& s, double r2) {
  // exactly (1, 0) on panels entirely left of -r2
  double dev = 0.0;
  const auto xs = s.grid->x();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] < -r2 - s.grid->panel_width())
      dev = std::max({dev, std::abs(s.z1[i] - 1.0), std::abs(s.z2[i])});
  return dev;
}

double sup_a_minus_one(const Solution& s, double r1) {
  double dev = 0.0;
  const auto xs = s.grid->x();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] < -r1) dev = std::max(dev, std::abs(s.z1[i] - 1.0));
  return dev;
}

void verify_point(Collector& c, const std::string& name, const SystemSpec& spec, bool ode_only,
                  const SolverOptions& opts) {
  const std::string tag = fmt::format("{} h={:g} eps1={:.3g} eps2={:.3g}", name, spec.h, spec.eps1, spec.eps2);
  const Regime regime = classify_regime(spec);

  std::optional<TransferResult> tn, to;
  try {
    to = transfer_matrix(spec, SolverPath::DirectODE, opts);
  } catch (const std::exception& e) {
    c.error(tag, "ode solve", e);
  }
  if (ode_only) {
    c.skip(tag, "neumann solve", "ODE path only for this preset");
  } else if (regime == Regime::Coupled) {
    c.skip(tag, "neumann solve", "RegimeViolation: coupled regime");
  } else {
    try {
      tn = transfer_matrix(spec, SolverPath::NeumannSeries, opts);
    } catch (const std::exception& e) {
      c.error(tag, "neumann solve", e);
    }
  }

  for (const auto* t : {&tn, &to}) {
    if (!*t) continue;
    const auto& r = **t;
    const std::string p = to_string(r.path);
    c.check(tag, "det T = 1 (" + p + ")", r.T.det_deviation, 1e-8);
    c.check(tag, "T constant in x (" + p + ")", r.T.constancy_deviation, 1e-6);
    c.check(tag, "residual (" + p + ")", r.residual, opts.residual_tol);
    c.check(tag, "wronskian propagation (" + p + ")",
            std::max(wronskian_propagation_deviation(r.bases.w1l, r.bases.w2l),
                     wronskian_propagation_deviation(r.bases.w1r, r.bases.w2r)),
            1e-8);
    if (auto conv = hermite_convention(spec))
      c.check(tag, "hermite symmetry (" + p + ")",
              std::max(hermite_symmetry_deviation(r.bases.w1l, r.bases.w2l, *conv),
                       hermite_symmetry_deviation(r.bases.w1r, r.bases.w2r, *conv)),
              1e-6);
    c.check(tag, "left basis exact before cutoff (" + p + ")", left_basis_offset(r.bases.w1l, spec.cutoff.r2), 0.0);
  }
  if (tn && to)
    c.check(tag, "neumann vs ode", (tn->T.entries - to->T.entries).cwiseAbs().maxCoeff(), 1e-6);
  if (tn) c.check(tag, "A from integral formula", tn->a_direct_deviation, 1e-8);

  const auto& best = tn ? tn : to;
  if (!best) return;
  const double u = structural_unitarity(spec, best->T);
  if (!std::isnan(u)) {
    const bool rescaled = !hermite_convention(spec).has_value();
    c.check(tag, rescaled ? "unitarity after rescale" : "unitarity", u, rescaled ? 1e-4 : 1e-6);
  }

  if (regime == Regime::Coupled) {
    c.skip(tag, "predictor", "RegimeViolation: coupled regime");
    return;
  }
  if (regime == Regime::Marginal) {
    c.skip(tag, "predictor", "marginal regime");
    return;
  }
  const auto sp = scale_params(spec);
  const double mu2 = sp.mu_m_ntilde() * sp.mu_m_ntilde();
  // O-constant: 0.2 (m = 1) up to 3 (m = 3, h = 1e-3)
  c.check(tag, "first component 1 + O(mu~_1^2) on x < -r1",
          sup_a_minus_one(best->bases.w1l, spec.cutoff.r1) / (sp.mu_tilde1() * sp.mu_tilde1()), 10.0);
  try {
    const auto p = predicted_T(spec, Fidelity::OscIntegral);
    const double m = spec.m();
    if (spec.eps1 > 0.0) {
      const double scale1 = spec.eps1 * std::pow(spec.h, -(m - spec.n1) / (m + 1.0));
      // measured O-constant is 3.7 to 4.1 on tangent-m2
      c.check(tag, "t12 law / mu^2", std::abs(best->T(0, 1) - p.T(0, 1)) / scale1 / mu2, 10.0);
    }
    c.check(tag, "|t11 - 1| / envelope", std::abs(best->T(0, 0) - 1.0) / p.t11_bound, 5.0);
    c.check(tag, "|t22 - 1| / envelope", std::abs(best->T(1, 1) - 1.0) / p.t22_bound, 5.0);
  } catch (const std::exception& e) {
    c.error(tag, "predictor", e);
  }
}

}  // namespace

VerifyReport verify_suite(const VerifyConfig& cfg) {
  VerifyReport report;
  Collector c(report, cfg.tolerance_scale);

  std::vector<std::string> names = cfg.presets;
  if (names.empty() || (names.size() == 1 && names.front() == "all")) {
    names.clear();
    for (const auto& p : presets()) names.push_back(p.name);
  }
  for (const auto& name : names) {
    const auto t = preset(name);
    const auto it = std::find_if(presets().begin(), presets().end(), [&](const auto& p) { return p.name == name; });
    const bool ode_only = it->coupled_only;
    if (ode_only) {
      // classical transition probability, plus one point deep in the coupled regime
      const double h = 1e-2;
      for (double q : {0.1, 0.5, 10.0}) {
        const auto spec = t.instantiate(std::sqrt(q * h), h);
        verify_point(c, name, spec, true, cfg.solver);
        if (q > 1.0) continue;
        try {
          const auto tr = transfer_matrix(spec, SolverPath::DirectODE, cfg.solver);
          const double expect = std::exp(-std::numbers::pi * q);
          c.check(fmt::format("{} eps^2/h={:g}", name, q), "|t11|^2 vs exp(-pi eps^2/h), relative",
                  std::abs(std::norm(tr.T(0, 0)) - expect) / expect, 0.03);
        } catch (const std::exception& e) {
          c.error(name, "landau-zener", e);
        }
      }
      continue;
    }
    const int m = t.contact_order();
    for (double h : {1e-2, 1e-3}) {
      const double et = 0.05 * std::pow(h, m / (m + 1.0));
      try {
        verify_point(c, name, t.instantiate(et, h), false, cfg.solver);
      } catch (const std::exception& e) {
        c.error(name, "setup", e);
      }
    }
  }

  // statphase: closed form against the leading expansion coefficient
  try {
    const Polynomial Q{0, 0, 1};
    const Complex closed = omega_tilde0(2, 0, Polynomial{1.0}, Q);
    const auto d = dsp_expansion(ComplexPolynomial(Polynomial{1.0}), Q.antiderivative(), 1e-3, 1);
    c.check("global", "omega~0_{2,0}(1, x^2) closed vs expansion, relative",
            std::abs(closed - d.terms.front().coefficient) / std::abs(closed), 1e-10);
  } catch (const std::exception& e) {
    c.error("global", "closed form", e);
  }

  // oscquad: omega~(h) -> omega~0 at rate h^{1/3} for generic m = 2 data
  try {
    const Polynomial Q{0, 0, 1};
    const ComplexPolynomial W(Polynomial{1, 1});
    const Complex w0 = omega_tilde0(2, 0, W, Q);
    std::vector<std::pair<double, double>> pairs;
    for (double e10 : {-2.0, -2.5, -3.0, -3.5, -4.0}) {
      const double h = std::pow(10.0, e10);
      const auto q = require_converged(omega_tilde(2, 0, W, Q, h, CutoffSpec{}, {-1, 1}, {1e-12}));
      pairs.emplace_back(h, std::abs(q.value - w0));
    }
    c.check("global", "omega~(h) - omega~0 slope vs 1/3", std::abs(fit_convergence(pairs).slope - 1.0 / 3.0), 0.07);
  } catch (const std::exception& e) {
    c.error("global", "omega rate", e);
  }

  // solver: relative t12 error along eps~ = h^{4/5} shrinks with exponent 4/15
  try {
    const auto t = preset("tangent-m2");
    std::vector<std::pair<double, double>> pairs;
    bool monotone = true;
    for (double e10 : {-2.0, -2.5, -3.0, -3.5}) {
      const double h = std::pow(10.0, e10);
      const double et = std::pow(h, 0.8);
      const auto spec = t.instantiate(et, h);
      const auto tr = transfer_matrix(spec, SolverPath::NeumannSeries, cfg.solver);
      const auto p = predicted_T(spec, Fidelity::OscIntegral);
      const double err = std::abs(tr.T(0, 1) - p.T(0, 1)) / scale_params(spec).mu_m();
      if (!pairs.empty() && err >= pairs.back().second) monotone = false;
      pairs.emplace_back(h, err);
    }
    c.check("global", "t12 error decreases along eps~ = h^{4/5}", monotone ? 0.0 : 1.0, 0.0);
    const double target = 4.0 / 15.0;
    c.check("global", "t12 error exponent vs 4/15, relative",
            std::abs(fit_convergence(pairs).slope - target) / target, 0.2);
  } catch (const std::exception& e) {
    c.error("global", "t12 convergence", e);
  }

  // harness: thread count does not change the CSV
  try {
    SweepConfig s;
    s.h_grid = {1e-2, 1e-3, 3};
    s.paths = {SolverPath::NeumannSeries, SolverPath::DirectODE};
    s.solver = cfg.solver;
    s.threads = 1;
    const auto a = to_csv(run_sweep(s));
    s.threads = 3;
    const auto b = to_csv(run_sweep(s));
    c.check("global", "sweep CSV independent of thread count", a == b ? 0.0 : 1.0, 0.0);
  } catch (const std::exception& e) {
    c.error("global", "determinism", e);
  }
  return report;
}

void print_report(std::ostream& os, const VerifyReport& r) {
  for (const auto& c : r.checks) {
    if (c.skipped) {
      os << fmt::format("SKIP  {:<40} {:<48} {}\n", c.preset, c.name, c.note);
      continue;
    }
    os << fmt::format("{}  {:<40} {:<48} {:.3e} <= {:.3e}", c.passed ? "PASS" : "FAIL", c.preset, c.name,
                      c.measured, c.threshold);
    if (!c.note.empty()) os << "  " << c.note;
    os << '\n';
  }
  os << fmt::format("{} checks, {} failed, {} skipped\n", r.checks.size(), r.failures(),
                    std::count_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.skipped; }));
}

}  // namespace lzdeg
