#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lzdeg/config.hpp"
#include "lzdeg/errors.hpp"
#include "lzdeg/oscquad.hpp"
#include "lzdeg/statphase.hpp"

#ifndef LZDEG_VERSION
#define LZDEG_VERSION "unknown"
#endif
#ifndef LZDEG_GIT
#define LZDEG_GIT "unknown"
#endif
#ifndef LZDEG_BUILD_TYPE
#define LZDEG_BUILD_TYPE "unknown"
#endif
#ifndef LZDEG_COMPILER
#define LZDEG_COMPILER "unknown"
#endif

using namespace lzdeg;

namespace {

struct Flags {
  std::string preset;
  std::string config;
  std::string out;
  std::string path;
  std::string fidelity;
  std::optional<double> h;
  std::optional<double> eps;
  std::optional<double> eps1;
  std::optional<double> eps2;
  std::optional<double> tol;
  std::optional<int> threads;
  bool show_config = false;
  bool timing = false;
  // verify
  double tolerance_scale = 1.0;
  // dsp
  std::string phase = "0,0,1";
  std::string amplitude = "1";
  int order = 2;
};

std::string version_text() {
  return fmt::format("lzdeg {}\ngit {}\nbuild {}\ncompiler {} {}\nC++ {}", LZDEG_VERSION, LZDEG_GIT, LZDEG_BUILD_TYPE,
                     LZDEG_COMPILER, __VERSION__, __cplusplus);
}

std::string cfmt(Complex z) { return fmt::format("{:+.12e} {:+.12e}i", z.real(), z.imag()); }

/// File config, then flags on top.
CliConfig effective_config(const Flags& f, bool verify) {
  CliConfig c = f.config.empty() ? CliConfig{} : load_config(f.config);
  if (!f.preset.empty() && !verify) {
    c.sweep.preset = f.preset;
    c.sweep.system.reset();
  }
  if (f.h) c.h = f.h;
  if (f.eps) {
    c.eps = f.eps;
    c.eps1.reset();
    c.eps2.reset();
  }
  if (f.eps1 || f.eps2) {
    c.eps1 = f.eps1;
    c.eps2 = f.eps2;
    c.eps.reset();
  }
  if (!f.path.empty()) {
    if (f.path == "both")
      c.sweep.paths = {SolverPath::NeumannSeries, SolverPath::DirectODE};
    else
      c.sweep.paths = {parse_path(f.path)};
  }
  if (!f.fidelity.empty()) c.sweep.fidelities = {parse_fidelity(f.fidelity)};
  if (f.tol) c.sweep.solver.residual_tol = *f.tol;
  if (f.threads) c.sweep.threads = *f.threads;
  if (f.timing) c.sweep.timing = true;
  if (!f.out.empty()) c.sweep.out = f.out;
  c.validate();
  return c;
}

/// A single h or eps given for a sweep pins that coordinate.
SweepConfig sweep_of(const CliConfig& c) {
  SweepConfig s = c.sweep;
  if (c.h) s.h_grid = {*c.h, *c.h, 1};
  if (c.eps) s.eps_rule = {EpsKind::Fixed, *c.eps, 0.0};
  if (c.eps1) {
    s.eps_rule = {EpsKind::Fixed, std::sqrt(*c.eps1 * *c.eps2), 0.0};
    s.eps_ratio = *c.eps1 / *c.eps2;
  }
  return s;
}

std::vector<double> parse_coefficients(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(field, fmt::format("bad coefficient \"{}\"", item));
    }
  }
  if (out.empty()) throw ValidationError(field, "no coefficients");
  return out;
}

void print_matrix(std::ostream& os, const std::string& name, char entry, const Eigen::Matrix2cd& M) {
  os << name << ":\n";
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) os << fmt::format("  {}{}{} = {}\n", entry, r + 1, c + 1, cfmt(M(r, c)));
}

void print_point(std::ostream& os, const SystemSpec& spec, const std::string& label) {
  const auto sp = scale_params(spec);
  os << fmt::format("system  {}  m = {}, n1 = {}, n2 = {}\n", label, spec.m(), spec.n1, spec.n2);
  os << fmt::format("h = {:.6g}  eps1 = {:.6g}  eps2 = {:.6g}\n", spec.h, spec.eps1, spec.eps2);
  os << fmt::format("mu_m = {:.6g}  mu_mn = {:.6g}  mu~1 = {:.6g}  regime {}\n", sp.mu_m(), sp.mu_m_ntilde(),
                    sp.mu_tilde1(), to_string(classify_regime(spec)));
}

std::string label_of(const CliConfig& c) { return c.sweep.system ? "custom" : c.sweep.preset; }

int cmd_solve(std::ostream& os, const CliConfig& cfg) {
  const auto spec = cfg.point();
  print_point(os, spec, label_of(cfg));
  std::vector<TransferResult> results;
  for (auto path : cfg.sweep.paths) {
    auto r = transfer_matrix(spec, path, cfg.sweep.solver);
    os << fmt::format("\npath {}\n", path_name(path));
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    print_matrix(os, "T_ex", 't', r.T.entries);
    os << fmt::format("det dev {:.3e}  constancy dev {:.3e}  residual {:.3e}", r.T.det_deviation,
                      r.T.constancy_deviation, r.residual);
    if (path == SolverPath::NeumannSeries) os << fmt::format("  A_direct dev {:.3e}", r.a_direct_deviation);
    os << '\n';
    if (const auto conv = hermite_convention(spec)) {
      const auto S = scattering_matrix(r.T, *conv);
      print_matrix(os, "S", 's', S.entries);
      os << fmt::format("{}  |S*S - Id| = {:.3e}\n", to_string(*conv), unitarity_deviation(S));
    } else {
      const double u = structural_unitarity(spec, r.T);
      if (!std::isnan(u)) os << fmt::format("rescaled |S*S - Id| = {:.3e}\n", u);
    }
    results.push_back(std::move(r));
  }
  if (results.size() == 2)
    os << fmt::format("\nseries vs ode max entry dev {:.3e}\n",
                      (results[0].T.entries - results[1].T.entries).cwiseAbs().maxCoeff());

  if (classify_regime(spec) == Regime::Coupled) {
    os << "\nprediction skipped: coupled regime\n";
    return 0;
  }
  const auto& T = results.front().T;
  for (auto f : cfg.sweep.fidelities) {
    const auto p = predicted_T(spec, f);
    os << fmt::format("\nprediction ({})\n", fidelity_name(f));
    os << fmt::format("  t12 = {}\n  t21 = {}\n", cfmt(p.T(0, 1)), cfmt(p.T(1, 0)));
    const double d12 = std::abs(T(0, 1) - p.T(0, 1));
    const double d21 = std::abs(T(1, 0) - p.T(1, 0));
    os << fmt::format("  |dt12| = {:.3e} (rel {:.3e})  |dt21| = {:.3e}  scale mu^2 = {:.3e}\n", d12,
                      std::abs(p.T(0, 1)) > 0 ? d12 / std::abs(p.T(0, 1)) : NAN, d21, p.offdiag_error_scale);
    os << fmt::format("  |t11 - 1| = {:.3e} (envelope {:.3e})  |t22 - 1| = {:.3e} (envelope {:.3e})\n",
                      std::abs(T(0, 0) - 1.0), p.t11_bound, std::abs(T(1, 1) - 1.0), p.t22_bound);
  }
  return 0;
}

int cmd_sweep(std::ostream& os, const CliConfig& cfg) {
  const auto s = sweep_of(cfg);
  for (const auto& n : s.notes()) std::cerr << "note: " << n << '\n';
  const auto records = run_sweep(s);
  write_csv(os, records);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.failed();
  if (failed) {
    std::cerr << fmt::format("error: PointsFailed: {} of {} points failed, see the regime column\n", failed,
                             records.size());
    return 1;
  }
  return 0;
}

int cmd_verify(std::ostream& os, const Flags& f, const CliConfig& cfg) {
  VerifyConfig v;
  v.tolerance_scale = f.tolerance_scale;
  v.solver = cfg.sweep.solver;
  if (!f.preset.empty() && f.preset != "all") {
    std::stringstream ss(f.preset);
    std::string name;
    while (std::getline(ss, name, ',')) {
      lzdeg::preset(name);
      v.presets.push_back(name);
    }
  }
  const auto r = verify_suite(v);
  print_report(os, r);
  if (!r.all_passed()) {
    std::cerr << fmt::format("error: VerificationFailed: {} checks failed\n", r.failures());
    return 1;
  }
  return 0;
}

int cmd_predict(std::ostream& os, const CliConfig& cfg) {
  const auto spec = cfg.point();
  print_point(os, spec, label_of(cfg));
  const int m = spec.m();
  if (m >= 2)
    os << fmt::format("omega_{} leading = {}\n", m, cfmt(omega_m(spec.V1, spec.V2)));
  else
    os << "omega_m leading: transversal crossing (m = 1)\n";
  const auto Q = spec.gap();
  os << fmt::format("omega~0_{{{},{}}}(U1) = {}\n", m, spec.n1, cfmt(omega_tilde0(m, spec.n1, spec.U1, Q)));
  if (!spec.U1.is_zero()) {
    const auto w = require_converged(omega_tilde(m, spec.n1, spec.U1, Q, spec.h, spec.cutoff, spec.interval));
    os << fmt::format("omega~_{{{},{}}}(h; U1) = {}\n", m, spec.n1, cfmt(w.value));
  }
  for (auto f : cfg.sweep.fidelities) {
    const auto p = predicted_T(spec, f);
    os << fmt::format("prediction ({})\n  t12 = {}\n  t21 = {}\n", fidelity_name(f), cfmt(p.T(0, 1)),
                      cfmt(p.T(1, 0)));
    os << fmt::format("  off-diagonal error scale {:.3e}  t11 envelope {:.3e}  t22 envelope {:.3e}\n",
                      p.offdiag_error_scale, p.t11_bound, p.t22_bound);
  }
  return 0;
}

int cmd_dsp(std::ostream& os, const Flags& f) {
  const Polynomial phi(parse_coefficients(f.phase, "phase"));
  const ComplexPolynomial a(Polynomial(parse_coefficients(f.amplitude, "amplitude")));
  const double h = f.h.value_or(1e-3);
  if (!(h > 0.0 && h < 1.0)) throw ValidationError("h", "must lie in (0, 1)");
  if (f.order < 0) throw ValidationError("order", "must be >= 0");
  const auto e = dsp_expansion(a, phi, h, f.order);
  os << fmt::format("k = {}  sign = {:+d}  h = {:.6g}  N = {}\n", e.k, e.sign, h, e.order_N);
  for (const auto& t : e.terms)
    os << fmt::format("  l = {}  h^({}/{})  {}\n", t.l, t.h_power.num, t.h_power.den, cfmt(t.coefficient));
  const CutoffSpec chi;
  const auto q =
      require_converged(integrate_adaptive({[&](double x) { return chi(x) * a(x); }, phi, h, {-1.0, 1.0}}, 1e-12));
  os << fmt::format("expansion  {}\nquadrature {}\n|difference| = {:.3e}  remainder O(h^({}/{}))\n", cfmt(e.value),
                    cfmt(q.value), std::abs(e.value - q.value), e.remainder.num, e.remainder.den);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate avoided crossings: transfer matrices and their asymptotics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "Print this help and exit");
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.set_version_flag("--version", version_text());
  app.footer("Subcommand flags: dsp --phase --amplitude --order, verify --tolerance-scale (see --help-all).");

  Flags f;
  app.add_option("--preset", f.preset, "Model preset; for verify a comma list or \"all\"");
  app.add_option("--config", f.config, "JSON config file, flags override it")->check(CLI::ExistingFile);
  app.add_option("--h", f.h, "Semiclassical parameter h");
  app.add_option("--eps", f.eps, "Coupling eps~ = sqrt(eps1 eps2)");
  app.add_option("--eps1", f.eps1, "Coupling eps1 (with --eps2)");
  app.add_option("--eps2", f.eps2, "Coupling eps2 (with --eps1)");
  app.add_option("--out", f.out, "Write output here instead of stdout");
  app.add_option("--path", f.path, "Solver path")->check(CLI::IsMember({"series", "ode", "both"}));
  app.add_option("--fidelity", f.fidelity, "Predictor fidelity")->check(CLI::IsMember({"closed", "integral"}));
  app.add_option("--tol", f.tol, "Residual target of the solver");
  app.add_option("--threads", f.threads, "Sweep worker threads, 0 = all cores");
  app.add_flag("--show-config", f.show_config, "Print the effective config as JSON and exit");
  app.add_flag("--timing", f.timing, "Measure wall_ms in sweeps (CSV no longer bit-reproducible)");

  auto* solve = app.add_subcommand("solve", "One point: T_ex, S, predictions and deviations");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep, CSV output");
  auto* verify = app.add_subcommand("verify", "Invariant and asymptotics checks, exit 0 iff all pass");
  verify->add_option("--tolerance-scale", f.tolerance_scale, "Multiply every threshold")->check(CLI::PositiveNumber);
  auto* predict = app.add_subcommand("predict", "Asymptotic prediction only, no solve");
  auto* dsp = app.add_subcommand("dsp", "Stationary-phase expansion against quadrature");
  dsp->add_option("--phase", f.phase, "Phase coefficients, ascending, comma separated")->capture_default_str();
  dsp->add_option("--amplitude", f.amplitude, "Amplitude coefficients, ascending")->capture_default_str();
  dsp->add_option("--order", f.order, "Expansion order N")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: UsageError: " << e.what() << '\n';
    return 2;
  }

  try {
    const bool is_verify = verify->parsed();
    const auto cfg = dsp->parsed() ? CliConfig{} : effective_config(f, is_verify);
    if (f.show_config) {
      std::cout << emit_config(cfg);
      return 0;
    }
    std::ofstream file;
    if (!f.out.empty()) {
      file.open(f.out);
      if (!file) throw ConfigError(fmt::format("cannot write {}", f.out));
    }
    std::ostream& os = f.out.empty() ? std::cout : file;
    if (solve->parsed()) return cmd_solve(os, cfg);
    if (sweep->parsed()) return cmd_sweep(os, cfg);
    if (is_verify) return cmd_verify(os, f, cfg);
    if (predict->parsed()) return cmd_predict(os, cfg);
    return cmd_dsp(os, f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 1;
  }
}
