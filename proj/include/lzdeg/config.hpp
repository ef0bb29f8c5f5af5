#pragma once

#include <optional>
#include <string>

#include "lzdeg/harness.hpp"

namespace lzdeg {

/// Run configuration as read from a JSON document and/or command-line flags.
/// A single point is (h, eps) or (h, eps1, eps2); sweeps use `sweep`.
struct CliConfig {
  SweepConfig sweep;
  std::optional<double> h;
  std::optional<double> eps;
  std::optional<double> eps1;
  std::optional<double> eps2;
  std::string source = "defaults";  // file path, "inline" or "defaults"

  /// The single point used by `solve` and `predict`. Missing h falls back to
  /// the first h of the grid, missing eps to the eps rule.
  SystemSpec point() const;
  /// Throws ValidationError naming the field.
  void validate() const;

  friend bool operator==(const CliConfig& a, const CliConfig& b) {
    return a.sweep == b.sweep && a.h == b.h && a.eps == b.eps && a.eps1 == b.eps1 && a.eps2 == b.eps2;
  }
};

/// Throws ParseError (with line and column) on malformed JSON and
/// ValidationError on unknown keys, wrong types or bad values.
CliConfig parse_config(const std::string& text, std::string source = "inline");
CliConfig load_config(const std::string& path);
/// Every field, defaults included.
std::string emit_config(const CliConfig& cfg);

/// Closest candidate by edit distance, empty when nothing is close.
std::string suggest(const std::string& key, const std::vector<std::string>& candidates);

std::string path_name(SolverPath p);        // "series" / "ode"
std::string fidelity_name(Fidelity f);      // "closed" / "integral"
SolverPath parse_path(const std::string& s);
Fidelity parse_fidelity(const std::string& s);

}  // namespace lzdeg
