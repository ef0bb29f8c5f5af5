#pragma once

#include <cstddef>
#include <functional>

#include "lzdeg/cutoff.hpp"
#include "lzdeg/polynomial.hpp"

namespace lzdeg {

using Amplitude = std::function<Complex(double)>;

/// a(x) exp(i phi(x) / h) on an interval. The phase is a real polynomial so
/// its derivative bound is exact.
struct OscIntegrand {
  Amplitude amplitude;
  Polynomial phase;
  double h = 1e-2;
  Interval interval{-1.0, 1.0};
};

struct QuadResult {
  Complex value{0.0, 0.0};
  double error = 0.0;
  bool converged = true;
  std::size_t panels = 0;
};

struct AdaptiveOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  /// Radians of phase change allowed across one gap between abscissae.
  double oscillation_budget = 0.7853981633974483;
  std::size_t max_panels = 4'000'000;
};

/// GK15 panels sized to the local phase speed, refined globally (largest
/// Kronrod-Gauss difference first). Never throws on non-convergence; the
/// result is flagged instead. Use `require_converged` to turn that into
/// ToleranceNotMet.
QuadResult integrate_adaptive(const OscIntegrand& g, const AdaptiveOptions& opts = {});
QuadResult integrate_adaptive(const OscIntegrand& g, double rel_tol);
const QuadResult& require_converged(const QuadResult& r);

struct BruteForceOptions {
  double oversample = 8.0;
  std::size_t max_points = 100'000'000;
};

/// Composite Simpson on a uniform grid; error = |S_N - S_{N/2}|.
QuadResult brute_force(const OscIntegrand& g, const BruteForceOptions& opts = {});

/// h^{-(n+1)/(m+1)} * integral of chi W exp((i/h) int_0^x Q).
/// W = 0 gives 0 without quadrature.
QuadResult omega_tilde(int m, int n, const ComplexPolynomial& W, const Polynomial& Q, double h,
                       const CutoffSpec& chi, const Interval& interval = {-1.0, 1.0},
                       const AdaptiveOptions& opts = {});

/// Same integrand, brute-force oracle.
QuadResult omega_tilde_brute_force(int m, int n, const ComplexPolynomial& W, const Polynomial& Q,
                                   double h, const CutoffSpec& chi,
                                   const Interval& interval = {-1.0, 1.0},
                                   const BruteForceOptions& opts = {});

/// Difference of omega_tilde between two cutoffs, integrated directly from
/// (chi_a - chi_b) W e^{i Phi/h} so that cancellation does not limit it.
QuadResult omega_tilde_cutoff_difference(int m, int n, const ComplexPolynomial& W,
                                         const Polynomial& Q, double h, const CutoffSpec& chi_a,
                                         const CutoffSpec& chi_b,
                                         const Interval& interval = {-1.0, 1.0},
                                         const AdaptiveOptions& opts = {});

/// Bracket of the oscillatory-integral estimate for x^{l1} a_h e^{i phi/h}
/// where phi' vanishes to order k at 0 and nowhere else:
///   sup|a_h| h^{-((k-l1)/(k+1))_+}
///   + sup|x^{-l2} a_h'| log(1/h)^{[l1+l2+1 = k]} h^{-((k-l1-l2-1)/(k+1))_+}
/// so that (1/h)|integral| <= C * bracket with C independent of h.
double osc_bound_bracket(int k, int l1, int l2, double sup_a, double sup_xl2_da, double h);

}  // namespace lzdeg
