#pragma once

#include <array>
#include <vector>

namespace lzdeg {

/// 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1]
/// (QUADPACK qk15 constants). Only the non-negative half is stored.
struct GaussKronrod15 {
  static constexpr std::array<double, 8> nodes{
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> kronrod_weights{
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Weights of the Gauss nodes nodes[1], nodes[3], nodes[5], nodes[7].
  static constexpr std::array<double, 4> gauss_weights{
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  /// Widest gap between neighbouring abscissae, as a fraction of the panel width.
  static constexpr double max_spacing_fraction = 0.5 * 0.207784955007898467600689403773245;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

/// Legendre polynomials P_0..P_n at t.
std::vector<double> legendre_values(int n, double t);

}  // namespace lzdeg
