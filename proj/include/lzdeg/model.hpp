#pragma once

#include <optional>
#include <string>
#include <utility>

#include "lzdeg/cutoff.hpp"
#include "lzdeg/polynomial.hpp"

namespace lzdeg {

/// Smallest k with |c_k| > tol * max_j |c_j| (Taylor coefficients at 0);
/// nullopt when every derivative vanishes.
std::optional<int> vanishing_order(const Polynomial& f, double tol = 0.0);
std::optional<int> vanishing_order(const ComplexPolynomial& f, double tol = 0.0);

/// Geometry of the crossing of xi = -V1(x) and xi = -V2(x) at x = 0.
struct CrossingGeometry {
  double V0 = 0.0;
  std::pair<double, double> rho0{0.0, 0.0};  // (0, -V0)
  int m = 1;                                  // contact order
  double leading_gap = 0.0;                   // V1^{(m)}(0) - V2^{(m)}(0)
};

/// The 2x2 first-order system (h D_x + H) w = 0 with
/// H = [[V1, eps1 U1], [eps2 U2, V2]] on an interval containing 0.
struct SystemSpec {
  Polynomial V1;
  Polynomial V2;
  ComplexPolynomial U1;
  ComplexPolynomial U2;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double h = 1e-2;
  Interval interval{-1.0, 1.0};
  CutoffSpec cutoff;
  CrossingGeometry geometry;
  int n1 = 0;
  int n2 = 0;

  /// V1 - V2.
  Polynomial gap() const { return V1 - V2; }
  /// Integral of V1 - V2 from 0.
  Polynomial gap_phase() const { return gap().antiderivative(); }
  int m() const { return geometry.m; }
};

/// Validates the model and derives contact/vanishing orders.
/// Throws DegenerateModel, BadInterval, BadCutoff or PreconditionViolation.
SystemSpec build_system(Polynomial V1, Polynomial V2, ComplexPolynomial U1, ComplexPolynomial U2,
                        double eps1, double eps2, double h, Interval interval = {-1.0, 1.0},
                        CutoffSpec cutoff = {}, double tol = 0.0);

/// Same model with new small parameters.
SystemSpec with_parameters(const SystemSpec& spec, double eps1, double eps2, double h);

/// iota(k) = 0 for even k, 1 for odd k.
inline int parity(int k) { return k % 2 == 0 ? 0 : 1; }

/// Regime bookkeeping for one (eps1, eps2, h) point.
struct ScaleParams {
  double h = 0.0;
  int m = 1;
  double eps_tilde = 0.0;  // sqrt(eps1 eps2)
  double n_tilde = 0.0;    // (n1 + n2) / 2
  double zeta = 0.0;       // (mu_{m, n_tilde} / eps_tilde)^2
  double zeta1 = 0.0;      // h^{-1-nu1}
  double zeta2 = 0.0;
  double nu1 = 0.0;        // (m - n1 - iota(m n1)) / (m + 1)
  double nu2 = 0.0;

  /// eps_tilde h^{-k/(k+1)}.
  double mu_k(int k) const;
  /// eps_tilde h^{-(m-l)/(m+1)} when 2l+1 < m, else eps_tilde h^{-1/2} log(1/h)^{delta/2}.
  double mu_ml(int m_order, double l) const;
  double mu_m() const { return mu_k(m); }
  double mu_m_ntilde() const { return mu_ml(m, n_tilde); }
  double mu_tilde1() const { return mu_k(1); }
};

ScaleParams scale_params(const SystemSpec& spec);

enum class Regime { NonCoupled, Coupled, Marginal };

struct RegimeThresholds {
  double low = 0.3;
  double high = 3.0;
};

/// NonCoupled iff mu_m < low, Coupled iff mu_m > high, else Marginal.
Regime classify_regime(const SystemSpec& spec, RegimeThresholds thresholds = {});
std::string to_string(Regime r);

}  // namespace lzdeg
