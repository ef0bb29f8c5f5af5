#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lzdeg/grid.hpp"
#include "lzdeg/model.hpp"

namespace lzdeg {

enum class Side { Left, Right };
enum class SolverPath { NeumannSeries, DirectODE };
enum class Fidelity { LeadingClosed, OscIntegral };
enum class Convention { Hermite1, Hermite2 };
enum class MatrixRole { Transfer, Scattering, Predicted };

std::string to_string(Side s);
std::string to_string(SolverPath p);
std::string to_string(Fidelity f);
std::string to_string(Convention c);

/// u_j = exp(-(i/h) int_0^x V_j), u_pm = exp((i/2h) int_0^x (V1 +- V2)).
/// Evaluated from exact antiderivatives.
struct PhaseFactors {
  Polynomial int_V1;
  Polynomial int_V2;
  double h = 1e-2;

  Complex u1(double x) const;
  Complex u2(double x) const;
  Complex u(int j, double x) const { return j == 1 ? u1(x) : u2(x); }
  Complex u_plus(double x) const;
  Complex u_minus(double x) const;
  /// exp(i Phi / h), Phi = int_0^x (V1 - V2) = u2 / u1.
  Complex carrier(double x) const;
};

PhaseFactors phase_factors(const SystemSpec& spec);

struct SolverOptions {
  /// Target for max |h D_x w + H w| over the grid.
  double residual_tol = 1e-8;
  double series_tol = 1e-12;
  int max_order = 30;
  double ode_tol = 1e-12;
  std::size_t max_points = 10'000'000;
  int nodes_per_panel = PanelGrid::kDefaultNodes;
  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

/// One exact solution w_{j,side}, stored in the interaction picture
/// z = diag(1/u1, 1/u2) w on the nodes of `grid`.
struct Solution {
  std::shared_ptr<const PanelGrid> grid;
  PhaseFactors phases;
  std::vector<Complex> z1;
  std::vector<Complex> z2;
  int j = 1;
  Side side = Side::Left;
  SolverPath construction = SolverPath::NeumannSeries;
  int order = 0;  // number of series terms kept (Neumann only)
  double residual = 0.0;
  // Neumann bookkeeping
  std::vector<double> increments;      // sup norm of each order's term
  double contraction_ratio = 0.0;      // largest measured increment ratio
  double predicted_ratio = 0.0;        // mu_{m, n~}^2

  Eigen::Vector2cd z_at(double x) const;
  Eigen::Vector2cd w_at(double x) const;
  /// w at every node.
  std::vector<Eigen::Vector2cd> values() const;
};

/// Sampled function on a panel grid.
struct Sampled {
  std::shared_ptr<const PanelGrid> grid;
  std::vector<Complex> values;
};

/// K_j f(x) = (i/h) u_j(x) int_anchor^x f / u_j on the nodes of `grid`.
/// Throws GridTooCoarse when 1/u_j turns by more than pi/8 between nodes.
std::vector<Complex> apply_K(const PanelGrid& grid, const PhaseFactors& ph, int j, double anchor,
                             std::span<const Complex> f);

/// Callable version: refines the solver grid of `spec` until two successive
/// results agree to `rel_tol`; GridTooCoarse past the point cap.
Sampled apply_K(const SystemSpec& spec, int j, double anchor, const std::function<Complex(double)>& f,
                double rel_tol = 1e-10, const SolverOptions& opts = {});

/// Starting grid: mean spacing min(h / (10 max|V1 - V2|), |I| / 2000).
std::shared_ptr<const PanelGrid> solver_grid(const SystemSpec& spec, const SolverOptions& opts = {});

/// Partial sums of the Neumann series anchored at the `side` end of I.
/// Refines the grid until the residual target is met.
Solution neumann_solution(const SystemSpec& spec, int j, Side side, const SolverOptions& opts = {});
/// Adaptive RKF78 on the interaction-picture ODE.
Solution ode_solution(const SystemSpec& spec, int j, Side side, const SolverOptions& opts = {});

/// On a given grid, no refinement.
Solution neumann_solution_on(const SystemSpec& spec, std::shared_ptr<const PanelGrid> grid, int j,
                             Side side, const SolverOptions& opts = {});
Solution ode_solution_on(const SystemSpec& spec, std::shared_ptr<const PanelGrid> grid, int j,
                         Side side, const SolverOptions& opts = {});

/// max over nodes of |h D_x w + H w| for the stored samples.
double residual(const SystemSpec& spec, const Solution& s);

/// det(w_a(x), w_b(x)).
Complex wronskian(const Solution& a, const Solution& b, double x);
/// max over nodes of |W(x) - exp((i/h) int_x^y (V1 + V2)) W(y)| / |W(y)|
/// with y the anchor of `a`.
double wronskian_propagation_deviation(const Solution& a, const Solution& b);

struct Matrix2 {
  Eigen::Matrix2cd entries = Eigen::Matrix2cd::Identity();
  double det_deviation = 0.0;
  double constancy_deviation = 0.0;
  MatrixRole role = MatrixRole::Transfer;

  Complex operator()(int r, int c) const { return entries(r, c); }
};

/// w_{1,l}, w_{2,l}, w_{1,r}, w_{2,r} on a common grid.
struct Bases {
  Solution w1l, w2l, w1r, w2r;
  double max_residual() const;
};

Bases solve_bases(const SystemSpec& spec, SolverPath path, const SolverOptions& opts = {});

struct TransferResult {
  Matrix2 T;
  SolverPath path = SolverPath::NeumannSeries;
  Bases bases;
  std::vector<double> eval_points;  // points actually used
  double residual = 0.0;
  /// Neumann only: max |A_direct - (T - Id)|, A_direct from the integral formulas.
  double a_direct_deviation = 0.0;
  std::vector<std::string> warnings;
};

/// (w_{1,l}, w_{2,l}) = (w_{1,r}, w_{2,r}) T, averaged over x in
/// {-1/2, -1/4, 0, 1/4, 1/2} r1.
TransferResult transfer_matrix(const SystemSpec& spec, SolverPath path, const SolverOptions& opts = {});
TransferResult transfer_matrix(const SystemSpec& spec, Bases bases, SolverPath path);

struct Prediction {
  Matrix2 T;
  double offdiag_error_scale = 0.0;  // mu_{m, n~}^2
  double t11_bound = 0.0;
  double t22_bound = 0.0;
};

Prediction predicted_T(const SystemSpec& spec, Fidelity fidelity);

Matrix2 scattering_matrix(const Matrix2& T, Convention convention);
Matrix2 rescale_bases(const Matrix2& T, double eps1, double eps2);
/// Frobenius norm of S* S - Id.
double unitarity_deviation(const Matrix2& S);

/// Pointwise check of u+ w_2 = J conj(u+ w_1) for one side.
/// J = (0, -1; 1, 0) under Hermite1 and (0, 1; 1, 0) under Hermite2.
double hermite_symmetry_deviation(const Solution& w1, const Solution& w2, Convention convention);

}  // namespace lzdeg
