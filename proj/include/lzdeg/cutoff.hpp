#pragma once

#include "lzdeg/polynomial.hpp"

namespace lzdeg {

/// Smooth plateau cutoff: chi = 1 on [-r1, r1], chi = 0 off (-r2, r2),
/// C-infinity in between (ratio of exp(-1/t) bumps).
struct CutoffSpec {
  double r1 = 0.3;
  double r2 = 0.7;

  /// Throws BadCutoff unless 0 < r1 < r2 and [-r2, r2] lies inside the interval.
  void validate(const Interval& domain) const;
  double operator()(double x) const;
  friend bool operator==(const CutoffSpec&, const CutoffSpec&) = default;
};

}  // namespace lzdeg
