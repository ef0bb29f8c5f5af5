#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "lzdeg/polynomial.hpp"

namespace lzdeg {

/// Equal-width panels on an interval, each carrying p Gauss-Legendre nodes.
/// Cumulative integrals, interpolation and differentiation are spectral
/// within a panel.
class PanelGrid {
 public:
  static constexpr int kDefaultNodes = 16;

  PanelGrid(Interval interval, std::size_t panels, int nodes_per_panel = kDefaultNodes);

  /// Panels sized so the mean node spacing is at most `spacing`.
  static PanelGrid with_spacing(Interval interval, double spacing, int nodes_per_panel = kDefaultNodes);

  const Interval& interval() const { return interval_; }
  std::size_t panels() const { return panels_; }
  int nodes_per_panel() const { return p_; }
  std::size_t size() const { return x_.size(); }
  std::span<const double> x() const { return x_; }
  double panel_width() const { return width_; }
  /// Widest gap between neighbouring nodes (including panel joins).
  double max_gap() const;

  std::size_t panel_of(double x) const;

  /// F_i = integral of f from interval.lo to x_i.
  std::vector<Complex> cumulative(std::span<const Complex> f) const;
  /// Integral over the whole interval.
  Complex total(std::span<const Complex> f) const;
  /// Integral of f from interval.lo to an arbitrary x, given F = cumulative(f).
  Complex integral_to(std::span<const Complex> f, std::span<const Complex> F, double x) const;

  Complex interpolate(std::span<const Complex> f, double x) const;
  std::vector<Complex> derivative(std::span<const Complex> f) const;

 private:
  struct Rule;
  static std::shared_ptr<const Rule> rule_for(int p);

  Interval interval_;
  std::size_t panels_;
  int p_;
  double width_;
  std::shared_ptr<const Rule> rule_;
  std::vector<double> x_;
};

}  // namespace lzdeg
