#include "lzdeg/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "lzdeg/errors.hpp"
#include "lzdeg/oscquad.hpp"
#include "lzdeg/statphase.hpp"

namespace lzdeg {

namespace {

constexpr Complex I{0.0, 1.0};

double sup_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

double max_gap_of(const SystemSpec& spec) {
  const double g = spec.gap().max_abs_on(spec.interval);
  return g > 0.0 ? g : 1.0;
}

// chi U1 e^{i Phi/h} and chi U2 e^{-i Phi/h} on the nodes
struct Couplings {
  std::vector<Complex> g1, g2;
};

Couplings couplings_on(const SystemSpec& spec, const PhaseFactors& ph, const PanelGrid& grid) {
  Couplings c;
  const auto xs = grid.x();
  c.g1.resize(xs.size());
  c.g2.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double chi = spec.cutoff(xs[i]);
    if (chi == 0.0) continue;
    const Complex e = ph.carrier(xs[i]);
    c.g1[i] = chi * spec.U1(xs[i]) * e;
    c.g2[i] = chi * spec.U2(xs[i]) * std::conj(e);
  }
  return c;
}

double anchor_of(const SystemSpec& spec, Side side) {
  return side == Side::Left ? spec.interval.lo : spec.interval.hi;
}

std::shared_ptr<const PanelGrid> refined(const PanelGrid& g, std::size_t max_points) {
  if (2 * g.size() > max_points) {
    std::ostringstream os;
    os << "residual target not met with " << g.size() << " points (cap " << max_points << ")";
    throw GridTooCoarse(os.str());
  }
  return std::make_shared<const PanelGrid>(g.interval(), 2 * g.panels(), g.nodes_per_panel());
}

Eigen::Matrix2cd basis_matrix(const Solution& a, const Solution& b, double x) {
  Eigen::Matrix2cd Z;
  Z.col(0) = a.z_at(x);
  Z.col(1) = b.z_at(x);
  return Z;
}

double condition_number(const Eigen::Matrix2cd& Z) {
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(Z);
  const auto s = svd.singularValues();
  return s(1) > 0.0 ? s(0) / s(1) : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }
std::string to_string(SolverPath p) { return p == SolverPath::NeumannSeries ? "neumann" : "ode"; }
std::string to_string(Fidelity f) { return f == Fidelity::LeadingClosed ? "leading" : "oscint"; }
std::string to_string(Convention c) { return c == Convention::Hermite1 ? "hermite1" : "hermite2"; }

Complex PhaseFactors::u1(double x) const { return std::polar(1.0, -int_V1(x) / h); }
Complex PhaseFactors::u2(double x) const { return std::polar(1.0, -int_V2(x) / h); }
Complex PhaseFactors::u_plus(double x) const {
  return std::polar(1.0, (int_V1(x) + int_V2(x)) / (2.0 * h));
}
Complex PhaseFactors::u_minus(double x) const {
  return std::polar(1.0, (int_V1(x) - int_V2(x)) / (2.0 * h));
}
Complex PhaseFactors::carrier(double x) const { return std::polar(1.0, (int_V1(x) - int_V2(x)) / h); }

PhaseFactors phase_factors(const SystemSpec& spec) {
  return {spec.V1.antiderivative(), spec.V2.antiderivative(), spec.h};
}

Eigen::Vector2cd Solution::z_at(double x) const {
  return {grid->interpolate(z1, x), grid->interpolate(z2, x)};
}

Eigen::Vector2cd Solution::w_at(double x) const {
  const auto z = z_at(x);
  return {phases.u1(x) * z(0), phases.u2(x) * z(1)};
}

std::vector<Eigen::Vector2cd> Solution::values() const {
  const auto xs = grid->x();
  std::vector<Eigen::Vector2cd> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = {phases.u1(xs[i]) * z1[i], phases.u2(xs[i]) * z2[i]};
  return out;
}

std::vector<Complex> apply_K(const PanelGrid& grid, const PhaseFactors& ph, int j, double anchor,
                             std::span<const Complex> f) {
  if (j != 1 && j != 2) throw PreconditionViolation("j must be 1 or 2");
  if (!grid.interval().contains(anchor)) throw PreconditionViolation("anchor outside the interval");
  const Polynomial V = (j == 1 ? ph.int_V1 : ph.int_V2).derivative();
  const double turn = V.max_abs_on(grid.interval()) * grid.max_gap() / ph.h;
  if (turn > std::numbers::pi / 8.0) {
    std::ostringstream os;
    os << "1/u_" << j << " turns by " << turn << " rad between nodes";
    throw GridTooCoarse(os.str());
  }
  const auto xs = grid.x();
  std::vector<Complex> q(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) q[i] = f[i] / ph.u(j, xs[i]);
  const auto F = grid.cumulative(q);
  const Complex Fa = grid.integral_to(q, F, anchor);
  std::vector<Complex> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (I / ph.h) * ph.u(j, xs[i]) * (F[i] - Fa);
  return out;
}

Sampled apply_K(const SystemSpec& spec, int j, double anchor, const std::function<Complex(double)>& f,
                double rel_tol, const SolverOptions& opts) {
  const auto ph = phase_factors(spec);
  auto grid = solver_grid(spec, opts);
  const double vmax = (j == 1 ? spec.V1 : spec.V2).max_abs_on(spec.interval);
  while (vmax * grid->max_gap() / spec.h > std::numbers::pi / 8.0) grid = refined(*grid, opts.max_points);

  auto run = [&](const PanelGrid& g) {
    std::vector<Complex> fv(g.size());
    const auto xs = g.x();
    for (std::size_t i = 0; i < xs.size(); ++i) fv[i] = f(xs[i]);
    return apply_K(g, ph, j, anchor, fv);
  };
  // compare the slowly varying part K f / u_j at fixed probes
  std::vector<double> probes(101);
  for (std::size_t k = 0; k < probes.size(); ++k)
    probes[k] = spec.interval.lo + spec.interval.length() * static_cast<double>(k) / 100.0;
  auto smooth_at_probes = [&](const PanelGrid& g, const std::vector<Complex>& v) {
    std::vector<Complex> s(v.size());
    const auto xs = g.x();
    for (std::size_t i = 0; i < xs.size(); ++i) s[i] = v[i] / ph.u(j, xs[i]);
    std::vector<Complex> out(probes.size());
    for (std::size_t k = 0; k < probes.size(); ++k) out[k] = g.interpolate(s, probes[k]);
    return out;
  };

  auto prev = run(*grid);
  auto prev_probe = smooth_at_probes(*grid, prev);
  for (;;) {
    auto finer = refined(*grid, opts.max_points);
    auto cur = run(*finer);
    auto cur_probe = smooth_at_probes(*finer, cur);
    double diff = 0.0;
    for (std::size_t k = 0; k < probes.size(); ++k) diff = std::max(diff, std::abs(cur_probe[k] - prev_probe[k]));
    if (diff <= rel_tol * std::max(sup_abs(cur_probe), 1e-300)) return {finer, std::move(cur)};
    grid = finer;
    prev_probe = std::move(cur_probe);
  }
}

std::shared_ptr<const PanelGrid> solver_grid(const SystemSpec& spec, const SolverOptions& opts) {
  const double spacing = std::min(spec.h / (10.0 * max_gap_of(spec)), spec.interval.length() / 2000.0);
  auto g = PanelGrid::with_spacing(spec.interval, spacing, opts.nodes_per_panel);
  if (g.size() > opts.max_points) {
    std::ostringstream os;
    os << "starting grid needs " << g.size() << " points (cap " << opts.max_points << ")";
    throw GridTooCoarse(os.str());
  }
  return std::make_shared<const PanelGrid>(std::move(g));
}

double residual(const SystemSpec& spec, const Solution& s) {
  const auto& g = *s.grid;
  const auto c = couplings_on(spec, s.phases, g);
  const auto d1 = g.derivative(s.z1);
  const auto d2 = g.derivative(s.z2);
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex r1 = spec.h * d1[i] + I * spec.eps1 * c.g1[i] * s.z2[i];
    const Complex r2 = spec.h * d2[i] + I * spec.eps2 * c.g2[i] * s.z1[i];
    r = std::max({r, std::abs(r1), std::abs(r2)});
  }
  return r;
}

Solution neumann_solution_on(const SystemSpec& spec, std::shared_ptr<const PanelGrid> grid, int j,
                             Side side, const SolverOptions& opts) {
  if (j != 1 && j != 2) throw PreconditionViolation("j must be 1 or 2");
  if (opts.max_order < 1) throw PreconditionViolation("max_order must be >= 1");
  if (classify_regime(spec) == Regime::Coupled)
    throw RegimeViolation("Neumann series requested in the coupled regime; use the ODE path");

  Solution s;
  s.grid = grid;
  s.phases = phase_factors(spec);
  s.j = j;
  s.side = side;
  s.construction = SolverPath::NeumannSeries;
  const auto sp = scale_params(spec);
  s.predicted_ratio = sp.mu_m_ntilde() * sp.mu_m_ntilde();

  const auto& g = *grid;
  const std::size_t N = g.size();
  const auto c = couplings_on(spec, s.phases, g);
  const Complex k1 = -I * spec.eps1 / spec.h;
  const Complex k2 = -I * spec.eps2 / spec.h;

  // lead component starts at 1; basis 1 leads with z1, basis 2 with z2
  const auto& g_other = j == 1 ? c.g2 : c.g1;
  const auto& g_lead = j == 1 ? c.g1 : c.g2;
  const Complex k_other = j == 1 ? k2 : k1;
  const Complex k_lead = j == 1 ? k1 : k2;

  std::vector<Complex> lead(N, Complex{1.0, 0.0}), other(N);
  std::vector<Complex> t_lead(N, Complex{1.0, 0.0}), t_other(N), prod(N);

  auto integrate = [&](const std::vector<Complex>& f) {
    auto F = g.cumulative(f);
    if (side == Side::Right) {
      const Complex tot = g.total(f);
      for (auto& v : F) v -= tot;
    }
    return F;
  };

  int k = 0;
  int rising = 0;
  for (;; ++k) {
    for (std::size_t i = 0; i < N; ++i) prod[i] = g_other[i] * t_lead[i];
    t_other = integrate(prod);
    for (std::size_t i = 0; i < N; ++i) {
      t_other[i] *= k_other;
      other[i] += t_other[i];
    }
    const double inc = std::max(sup_abs(t_lead), sup_abs(t_other));
    const double sol = std::max(sup_abs(lead), sup_abs(other));
    if (!s.increments.empty()) {
      const double prev = s.increments.back();
      if (prev > 1e-13 * sol) {
        const double ratio = inc / prev;
        s.contraction_ratio = std::max(s.contraction_ratio, ratio);
        rising = ratio >= 1.0 ? rising + 1 : 0;
        if (rising >= 2) {
          std::ostringstream os;
          os << "increment ratio >= 1 at orders " << k - 1 << " and " << k;
          throw SeriesDiverging(os.str());
        }
      }
    }
    s.increments.push_back(inc);
    if ((k >= 1 && inc < opts.series_tol * sol) || k + 1 >= opts.max_order) break;
    for (std::size_t i = 0; i < N; ++i) prod[i] = g_lead[i] * t_other[i];
    t_lead = integrate(prod);
    for (std::size_t i = 0; i < N; ++i) {
      t_lead[i] *= k_lead;
      lead[i] += t_lead[i];
    }
  }
  s.order = k + 1;
  s.z1 = j == 1 ? std::move(lead) : std::move(other);
  s.z2 = j == 1 ? std::move(other) : std::move(lead);
  s.residual = residual(spec, s);
  return s;
}

Solution ode_solution_on(const SystemSpec& spec, std::shared_ptr<const PanelGrid> grid, int j, Side side,
                         const SolverOptions& opts) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<Complex, 2>;
  if (j != 1 && j != 2) throw PreconditionViolation("j must be 1 or 2");

  Solution s;
  s.grid = grid;
  s.phases = phase_factors(spec);
  s.j = j;
  s.side = side;
  s.construction = SolverPath::DirectODE;
  const auto& ph = s.phases;

  // right-anchored solves run in t = -x so the stepper always moves forward
  const double dir = side == Side::Left ? 1.0 : -1.0;
  auto rhs = [&](const State& z, State& dz, double t) {
    const double x = dir * t;
    const double chi = spec.cutoff(x);
    if (chi == 0.0) {
      dz = {};
      return;
    }
    const Complex e = ph.carrier(x);
    dz[0] = dir * (-I * spec.eps1 / spec.h) * chi * spec.U1(x) * e * z[1];
    dz[1] = dir * (-I * spec.eps2 / spec.h) * chi * spec.U2(x) * std::conj(e) * z[0];
  };

  const auto xs = grid->x();
  const std::size_t N = xs.size();
  std::vector<double> times;
  times.reserve(N + 1);
  times.push_back(dir * anchor_of(spec, side));
  if (side == Side::Left)
    for (double x : xs) times.push_back(x);
  else
    for (std::size_t i = N; i-- > 0;) times.push_back(-xs[i]);

  s.z1.resize(N);
  s.z2.resize(N);
  std::size_t seen = 0;
  auto observer = [&](const State& z, double) {
    if (seen > 0) {
      const std::size_t idx = side == Side::Left ? seen - 1 : N - seen;
      s.z1[idx] = z[0];
      s.z2[idx] = z[1];
    }
    ++seen;
  };

  State z = j == 1 ? State{Complex{1.0, 0.0}, Complex{}} : State{Complex{}, Complex{1.0, 0.0}};
  const double max_dt = spec.h / (10.0 * max_gap_of(spec));
  auto stepper = ode::make_controlled(opts.ode_tol, opts.ode_tol, max_dt,
                                      ode::runge_kutta_fehlberg78<State, double, State, double>());
  try {
    ode::integrate_times(stepper, rhs, z, times.begin(), times.end(), 0.25 * max_dt, observer);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw StepUnderflow(e.what());
  }
  if (seen != N + 1) throw StepUnderflow("integration stopped before the end of the interval");
  s.residual = residual(spec, s);
  return s;
}

Solution neumann_solution(const SystemSpec& spec, int j, Side side, const SolverOptions& opts) {
  auto grid = solver_grid(spec, opts);
  for (;;) {
    auto s = neumann_solution_on(spec, grid, j, side, opts);
    if (s.residual <= opts.residual_tol) return s;
    grid = refined(*grid, opts.max_points);
  }
}

Solution ode_solution(const SystemSpec& spec, int j, Side side, const SolverOptions& opts) {
  auto grid = solver_grid(spec, opts);
  for (;;) {
    auto s = ode_solution_on(spec, grid, j, side, opts);
    if (s.residual <= opts.residual_tol) return s;
    grid = refined(*grid, opts.max_points);
  }
}

Complex wronskian(const Solution& a, const Solution& b, double x) {
  const auto wa = a.w_at(x);
  const auto wb = b.w_at(x);
  return wa(0) * wb(1) - wa(1) * wb(0);
}

double wronskian_propagation_deviation(const Solution& a, const Solution& b) {
  const auto& ph = a.phases;
  const double y = a.side == Side::Left ? a.grid->interval().lo : a.grid->interval().hi;
  const Complex Wy = wronskian(a, b, y);
  const double scale = std::abs(Wy);
  if (scale == 0.0) return 0.0;
  const Complex uy = ph.u1(y) * ph.u2(y);
  const auto xs = a.grid->x();
  double dev = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const Complex Wx = ph.u1(x) * ph.u2(x) * (a.z1[i] * b.z2[i] - a.z2[i] * b.z1[i]);
    const Complex propagated = ph.u1(x) * ph.u2(x) / uy * Wy;
    dev = std::max(dev, std::abs(Wx - propagated) / scale);
  }
  return dev;
}

double Bases::max_residual() const {
  return std::max({w1l.residual, w2l.residual, w1r.residual, w2r.residual});
}

Bases solve_bases(const SystemSpec& spec, SolverPath path, const SolverOptions& opts) {
  auto grid = solver_grid(spec, opts);
  for (;;) {
    auto one = [&](int j, Side side) {
      return path == SolverPath::NeumannSeries ? neumann_solution_on(spec, grid, j, side, opts)
                                               : ode_solution_on(spec, grid, j, side, opts);
    };
    Bases b{one(1, Side::Left), one(2, Side::Left), one(1, Side::Right), one(2, Side::Right)};
    if (b.max_residual() <= opts.residual_tol) return b;
    grid = refined(*grid, opts.max_points);
  }
}

TransferResult transfer_matrix(const SystemSpec& spec, SolverPath path, const SolverOptions& opts) {
  return transfer_matrix(spec, solve_bases(spec, path, opts), path);
}

TransferResult transfer_matrix(const SystemSpec& spec, Bases bases, SolverPath path) {
  TransferResult out;
  out.path = path;
  out.residual = bases.max_residual();
  out.T.role = MatrixRole::Transfer;

  std::vector<Eigen::Matrix2cd> samples;
  for (double f : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
    const double x = f * spec.cutoff.r1;
    const auto Zl = basis_matrix(bases.w1l, bases.w2l, x);
    const auto Zr = basis_matrix(bases.w1r, bases.w2r, x);
    if (condition_number(Zr) > 1e8) continue;
    samples.push_back(Zr.partialPivLu().solve(Zl));
    out.eval_points.push_back(x);
  }
  if (samples.empty()) throw IllConditioned("right basis matrix has condition number > 1e8 at every evaluation point");

  Eigen::Matrix2cd mean = Eigen::Matrix2cd::Zero();
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double spread = 0.0;
  for (const auto& s : samples) spread = std::max(spread, (s - mean).cwiseAbs().maxCoeff());
  out.T.entries = mean;
  out.T.constancy_deviation = spread / std::max(1.0, mean.cwiseAbs().maxCoeff());
  out.T.det_deviation = std::abs(mean.determinant() - 1.0);

  if (path == SolverPath::NeumannSeries) {
    const auto& g = *bases.w1l.grid;
    const auto c = couplings_on(spec, bases.w1l.phases, g);
    auto integral = [&](const std::vector<Complex>& k, const std::vector<Complex>& z) {
      std::vector<Complex> p(g.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = k[i] * z[i];
      return g.total(p);
    };
    const Complex k1 = -I * spec.eps1 / spec.h;
    const Complex k2 = -I * spec.eps2 / spec.h;
    Eigen::Matrix2cd A;
    A(0, 0) = k1 * integral(c.g1, bases.w1l.z2);
    A(0, 1) = k1 * integral(c.g1, bases.w2l.z2);
    A(1, 0) = k2 * integral(c.g2, bases.w1l.z1);
    A(1, 1) = k2 * integral(c.g2, bases.w2l.z1);
    out.a_direct_deviation = (A - (mean - Eigen::Matrix2cd::Identity())).cwiseAbs().maxCoeff();
  }

  if (spec.m() == 1) {
    const auto sp = scale_params(spec);
    const double gate = sp.mu_k(1) * std::sqrt(std::log(1.0 / spec.h));
    if (gate > 0.3) {
      std::ostringstream os;
      os << "m = 1: mu_1 sqrt(log 1/h) = " << gate << " is not small";
      out.warnings.push_back(os.str());
    }
  }
  out.bases = std::move(bases);
  return out;
}

Prediction predicted_T(const SystemSpec& spec, Fidelity fidelity) {
  if (classify_regime(spec) == Regime::Coupled) throw RegimeViolation("no asymptotic prediction in the coupled regime");
  const int m = spec.m();
  const double md = m;
  const Polynomial Q = spec.gap();

  auto omega = [&](int n, const ComplexPolynomial& W, const Polynomial& q) -> Complex {
    if (W.is_zero()) return {0.0, 0.0};
    if (fidelity == Fidelity::LeadingClosed) return omega_tilde0(m, n, W, q);
    return require_converged(omega_tilde(m, n, W, q, spec.h, spec.cutoff, spec.interval)).value;
  };

  Prediction p;
  p.T.role = MatrixRole::Predicted;
  Eigen::Matrix2cd T = Eigen::Matrix2cd::Identity();
  if (spec.eps1 != 0.0)
    T(0, 1) = -I * spec.eps1 * std::pow(spec.h, -(md - spec.n1) / (md + 1.0)) * omega(spec.n1, spec.U1, Q);
  if (spec.eps2 != 0.0)
    T(1, 0) = -I * spec.eps2 * std::pow(spec.h, -(md - spec.n2) / (md + 1.0)) * omega(spec.n2, spec.U2, -Q);
  p.T.entries = T;
  p.T.det_deviation = std::abs(T.determinant() - 1.0);

  const auto sp = scale_params(spec);
  const double mu2 = sp.mu_m_ntilde() * sp.mu_m_ntilde();
  const double mt2 = sp.mu_tilde1() * sp.mu_tilde1();
  p.offdiag_error_scale = mu2;
  p.t11_bound = std::min(mu2, mt2 * std::pow(spec.h, -sp.nu2));
  p.t22_bound = std::min(mu2, mt2 * std::pow(spec.h, -sp.nu1));
  return p;
}

Matrix2 scattering_matrix(const Matrix2& T, Convention convention) {
  Matrix2 S;
  S.role = MatrixRole::Scattering;
  S.constancy_deviation = T.constancy_deviation;
  if (convention == Convention::Hermite1) {
    S.entries = T.entries;
  } else {
    const Complex t22 = T(1, 1);
    if (std::abs(t22) < 1e-12) throw SingularT22("|t22| < 1e-12");
    S.entries << 1.0, T(0, 1), -T(1, 0), 1.0;
    S.entries /= t22;
  }
  S.det_deviation = std::abs(S.entries.determinant() - 1.0);
  return S;
}

Matrix2 rescale_bases(const Matrix2& T, double eps1, double eps2) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) throw PreconditionViolation("rescale_bases needs eps1, eps2 > 0");
  const double q = std::pow(eps2 / eps1, 0.25);
  Matrix2 out = T;
  out.entries(0, 1) *= q * q;
  out.entries(1, 0) /= q * q;
  return out;
}

double unitarity_deviation(const Matrix2& S) {
  return (S.entries.adjoint() * S.entries - Eigen::Matrix2cd::Identity()).norm();
}

double hermite_symmetry_deviation(const Solution& w1, const Solution& w2, Convention convention) {
  // in z variables: c = -+ conj(b), d = conj(a)
  const double s = convention == Convention::Hermite1 ? -1.0 : 1.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < w1.z1.size(); ++i) {
    dev = std::max(dev, std::abs(w2.z1[i] - s * std::conj(w1.z2[i])));
    dev = std::max(dev, std::abs(w2.z2[i] - std::conj(w1.z1[i])));
  }
  return dev;
}

}  // namespace lzdeg
