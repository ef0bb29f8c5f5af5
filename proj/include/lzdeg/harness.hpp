#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lzdeg/solver.hpp"

namespace lzdeg {

/// Everything of a SystemSpec except the small parameters.
struct SystemTemplate {
  Polynomial V1;
  Polynomial V2;
  ComplexPolynomial U1;
  ComplexPolynomial U2;
  Interval interval{-1.0, 1.0};
  CutoffSpec cutoff;
  double eps_ratio = 1.0;  // eps1 / eps2

  /// eps1 = eps~ sqrt(ratio), eps2 = eps~ / sqrt(ratio).
  SystemSpec instantiate(double eps_tilde, double h) const;
  SystemSpec instantiate(double eps1, double eps2, double h) const;
  int contact_order() const;
  friend bool operator==(const SystemTemplate&, const SystemTemplate&) = default;
};

struct PresetInfo {
  std::string name;
  std::string description;
  bool coupled_only = false;  // ODE path only
};

const std::vector<PresetInfo>& presets();
/// Throws ConfigError (with the list of names) for an unknown preset.
SystemTemplate preset(const std::string& name);

/// Hermite1 when U1 = conj(U2) and eps1 = eps2, Hermite2 when U1 = -conj(U2)
/// and eps1 = eps2.
std::optional<Convention> hermite_convention(const SystemSpec& spec);

/// ||S*S - Id|| for the matching convention; for U1 = conj(U2) with
/// eps1 != eps2 the bases are rescaled first. NaN otherwise.
double structural_unitarity(const SystemSpec& spec, const Matrix2& T);

/// Geometric h grid from `start` down to `stop`.
struct HGrid {
  double start = 1e-2;
  double stop = 1e-3;
  int points = 3;

  std::vector<double> values() const;
  friend bool operator==(const HGrid&, const HGrid&) = default;
};

enum class EpsKind { Fixed, PowerLaw, FixedMu };
std::string to_string(EpsKind k);

/// Fixed: eps~ = value. PowerLaw: eps~ = value h^exponent.
/// FixedMu: mu_m = value, i.e. eps~ = value h^{m/(m+1)}.
struct EpsRule {
  EpsKind kind = EpsKind::FixedMu;
  double value = 0.05;
  double exponent = 0.8;

  double eps_tilde(double h, int m) const;
  friend bool operator==(const EpsRule&, const EpsRule&) = default;
};

struct SweepConfig {
  std::string preset = "tangent-m2";
  std::optional<SystemTemplate> system;  // overrides preset
  HGrid h_grid;
  EpsRule eps_rule;
  std::optional<double> eps_ratio;       // overrides the template's
  std::vector<SolverPath> paths{SolverPath::NeumannSeries};
  std::vector<Fidelity> fidelities{Fidelity::OscIntegral};
  int threads = 1;                       // 0: hardware concurrency
  bool timing = false;                   // false writes wall_ms = 0
  SolverOptions solver;
  std::string out;

  SystemTemplate system_template() const;
  /// Throws ConfigError.
  void validate() const;
  /// Regime remarks, e.g. whether a power law has a NonCoupled tail.
  std::vector<std::string> notes() const;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct PredictedEntries {
  Fidelity fidelity = Fidelity::OscIntegral;
  Complex t12{0.0, 0.0};
  Complex t21{0.0, 0.0};
  double abs_err_t12 = 0.0;
  double rel_err_t12 = 0.0;  // NaN when |pred| < 1e-14
};

struct RunRecord {
  double h = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  int m = 0;
  int n1 = 0;
  int n2 = 0;
  double mu_m = 0.0;
  double mu_mn = 0.0;
  std::string regime;  // "error:<Kind>" for failed points
  SolverPath path = SolverPath::NeumannSeries;
  Eigen::Matrix2cd T = Eigen::Matrix2cd::Constant(Complex(NAN, NAN));
  std::vector<PredictedEntries> predictions;
  double det_dev = NAN;
  double const_dev = NAN;
  double unit_dev = NAN;
  double residual = NAN;
  double wall_ms = 0.0;
  std::string error;

  bool failed() const { return !error.empty(); }
};

/// One record per (h, path); failures are recorded, never thrown.
/// Records are sorted by (h, eps1, eps2, path).
std::vector<RunRecord> run_sweep(const SweepConfig& cfg);
RunRecord run_point(const SystemSpec& spec, SolverPath path, const std::vector<Fidelity>& fidelities,
                    const SolverOptions& opts = {}, bool timing = false);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::string to_csv(const std::vector<RunRecord>& records);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double confidence = 0.0;  // 2 standard errors
  std::size_t n = 0;
};

/// Least squares of log err against log h. Throws InsufficientData.
FitResult fit_convergence(const std::vector<std::pair<double, double>>& pairs);

struct VerifyConfig {
  std::vector<std::string> presets;  // empty: all
  double tolerance_scale = 1.0;      // multiplies every threshold
  SolverOptions solver;
};

struct CheckResult {
  std::string name;
  std::string preset;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::size_t failures() const;
};

VerifyReport verify_suite(const VerifyConfig& cfg);
void print_report(std::ostream& os, const VerifyReport& r);

}  // namespace lzdeg
