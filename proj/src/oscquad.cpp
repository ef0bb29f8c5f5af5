#include "lzdeg/oscquad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "lzdeg/errors.hpp"
#include "lzdeg/model.hpp"
#include "lzdeg/quadrature_rules.hpp"
#include "lzdeg/summation.hpp"

namespace lzdeg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Complex value;
  double error = 0.0;
  double magnitude = 0.0;  // integral of |f|, for the roundoff floor
};

// One GK15 panel with the QUADPACK error heuristic.
template <class F>
Panel gk15(const F& f, double a, double b) {
  using R = GaussKronrod15;
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  std::array<Complex, 15> fv;
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * R::nodes[static_cast<std::size_t>(j)];
    fv[static_cast<std::size_t>(j)] = f(c - dx);
    fv[static_cast<std::size_t>(14 - j)] = f(c + dx);
  }
  Complex kron = fv[7] * R::kronrod_weights[7];
  Complex gauss = fv[7] * R::gauss_weights[3];
  double resabs = std::abs(fv[7]) * R::kronrod_weights[7];
  for (int j = 0; j < 7; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const Complex pair = fv[ju] + fv[14 - ju];
    kron += pair * R::kronrod_weights[ju];
    if (j % 2 == 1) gauss += pair * R::gauss_weights[ju / 2];
    resabs += (std::abs(fv[ju]) + std::abs(fv[14 - ju])) * R::kronrod_weights[ju];
  }
  const Complex mean = kron * 0.5;
  double resasc = std::abs(fv[7] - mean) * R::kronrod_weights[7];
  for (int j = 0; j < 7; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    resasc += (std::abs(fv[ju] - mean) + std::abs(fv[14 - ju] - mean)) * R::kronrod_weights[ju];
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * hw;
  resabs *= hw;
  resasc *= hw;
  double err = std::abs((kron - gauss) * hw);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(err, 50.0 * kEps * resabs);
  p.error = err;
  p.magnitude = resabs;
  return p;
}

// Initial partition: each panel short enough that the phase turns by at most
// the budget between neighbouring abscissae.
std::vector<double> phase_resolving_edges(const Polynomial& dphi, double h, const Interval& iv,
                                          double budget) {
  const double max_width = iv.length() / 8.0;
  const double factor = budget * h / GaussKronrod15::max_spacing_fraction;
  std::vector<double> edges{iv.lo};
  double x = iv.lo;
  while (x < iv.hi) {
    double w = std::min(max_width, iv.hi - x);
    for (int it = 0; it < 60; ++it) {
      const double speed = dphi.max_abs_on({x, x + w});
      if (speed * w <= factor) break;
      w = 0.999 * factor / speed;
    }
    // avoid a sliver at the end
    if (iv.hi - (x + w) < 1e-3 * w) w = iv.hi - x;
    x = (w >= iv.hi - x) ? iv.hi : x + w;
    edges.push_back(x);
  }
  return edges;
}

Complex sum_panels(std::vector<Panel>& live) {
  std::sort(live.begin(), live.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  std::vector<Complex> vals;
  vals.reserve(live.size());
  for (const auto& p : live) vals.push_back(p.value);
  return pairwise_sum<Complex>(vals);
}

}  // namespace

QuadResult integrate_adaptive(const OscIntegrand& g, const AdaptiveOptions& opts) {
  if (!(g.h > 0.0)) throw PreconditionViolation("h must be positive");
  if (!(opts.rel_tol > 0.0)) throw PreconditionViolation("tolerance must be positive");
  if (!(g.interval.hi > g.interval.lo)) return {};
  const Polynomial dphi = g.phase.derivative();
  const double inv_h = 1.0 / g.h;
  auto f = [&](double x) {
    const double ph = g.phase(x) * inv_h;
    return g.amplitude(x) * Complex(std::cos(ph), std::sin(ph));
  };

  const auto edges = phase_resolving_edges(dphi, g.h, g.interval, opts.oscillation_budget);
  std::vector<Panel> panels;
  panels.reserve(2 * edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) panels.push_back(gk15(f, edges[i], edges[i + 1]));

  // live flags + max-heap on error (ties broken by position for determinism)
  std::vector<char> alive(panels.size(), 1);
  auto cmp = [&](std::size_t l, std::size_t r) {
    if (panels[l].error != panels[r].error) return panels[l].error < panels[r].error;
    return panels[l].a > panels[r].a;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  Complex total;
  double err_total = 0.0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    heap.push(i);
    total += panels[i].value;
    err_total += panels[i].error;
    magnitude += panels[i].magnitude;
  }
  auto target = [&] {
    return std::max({opts.rel_tol * std::abs(total), opts.abs_tol, 100.0 * kEps * magnitude});
  };

  std::size_t live_count = panels.size();
  std::size_t steps = 0;
  while (err_total > target() && live_count < opts.max_panels && !heap.empty()) {
    const std::size_t i = heap.top();
    heap.pop();
    const Panel p = panels[i];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;  // cannot split further
    alive[i] = 0;
    panels.push_back(gk15(f, p.a, mid));
    panels.push_back(gk15(f, mid, p.b));
    alive.push_back(1);
    alive.push_back(1);
    const std::size_t l = panels.size() - 2;
    total += panels[l].value + panels[l + 1].value - p.value;
    err_total += panels[l].error + panels[l + 1].error - p.error;
    magnitude += panels[l].magnitude + panels[l + 1].magnitude - p.magnitude;
    heap.push(l);
    heap.push(l + 1);
    ++live_count;
    if (++steps % 1024 == 0) {
      // resynchronise running sums
      err_total = 0.0;
      total = 0.0;
      for (std::size_t j = 0; j < panels.size(); ++j)
        if (alive[j]) {
          err_total += panels[j].error;
          total += panels[j].value;
        }
    }
  }

  std::vector<Panel> live;
  live.reserve(live_count);
  double err = 0.0;
  for (std::size_t j = 0; j < panels.size(); ++j)
    if (alive[j]) live.push_back(panels[j]);
  std::sort(live.begin(), live.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  std::vector<double> errs;
  errs.reserve(live.size());
  for (const auto& p : live) errs.push_back(p.error);
  err = pairwise_sum<double>(errs);

  QuadResult out;
  out.value = sum_panels(live);
  out.error = err;
  out.panels = live.size();
  out.converged = err <= std::max({opts.rel_tol * std::abs(out.value), opts.abs_tol,
                                   100.0 * kEps * magnitude});
  return out;
}

QuadResult integrate_adaptive(const OscIntegrand& g, double rel_tol) {
  AdaptiveOptions o;
  o.rel_tol = rel_tol;
  return integrate_adaptive(g, o);
}

const QuadResult& require_converged(const QuadResult& r) {
  if (!r.converged) {
    std::ostringstream os;
    os << "adaptive quadrature stopped at " << r.panels << " panels with error estimate " << r.error
       << " (best estimate " << r.value << ")";
    throw ToleranceNotMet(os.str());
  }
  return r;
}

QuadResult brute_force(const OscIntegrand& g, const BruteForceOptions& opts) {
  if (!(g.h > 0.0)) throw PreconditionViolation("h must be positive");
  if (!(opts.oversample >= 4.0)) throw PreconditionViolation("oversample must be >= 4");
  const double len = g.interval.length();
  if (!(len > 0.0)) return {};
  const double speed = std::max(1.0, g.phase.derivative().max_abs_on(g.interval));
  const double step_max = g.h / (opts.oversample * speed);
  const double n_real = std::ceil(len / step_max / 4.0) * 4.0;
  if (!(n_real + 1.0 <= static_cast<double>(opts.max_points))) {
    std::ostringstream os;
    os << "brute-force grid needs " << n_real + 1.0 << " points (cap " << opts.max_points << ")";
    throw GridTooLarge(os.str());
  }
  const auto n = static_cast<std::size_t>(n_real);
  const double dx = len / static_cast<double>(n);
  const double inv_h = 1.0 / g.h;

  // Simpson weights 1,4,2,4,...,1 on the fine grid, 1,4,2,... on even points.
  CompensatedSum<Complex> fine;
  CompensatedSum<Complex> coarse;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = (i == n) ? g.interval.hi : g.interval.lo + static_cast<double>(i) * dx;
    const double ph = g.phase(x) * inv_h;
    const Complex fx = g.amplitude(x) * Complex(std::cos(ph), std::sin(ph));
    const bool end = (i == 0 || i == n);
    fine.add(fx * (end ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0)));
    if (i % 2 == 0) coarse.add(fx * (end ? 1.0 : ((i / 2) % 2 == 1 ? 4.0 : 2.0)));
  }
  QuadResult out;
  out.value = fine.value() * (dx / 3.0);
  const Complex s_half = coarse.value() * (2.0 * dx / 3.0);
  out.error = std::abs(out.value - s_half);
  out.panels = n;
  return out;
}

namespace {

void check_omega_preconditions(int m, int n, const ComplexPolynomial& W, const Polynomial& Q,
                               const CutoffSpec& chi, const Interval& interval) {
  chi.validate(interval);
  if (m < 1 || n < 0) throw PreconditionViolation("need m >= 1 and n >= 0");
  const auto qm = vanishing_order(Q);
  if (!qm || *qm != m) {
    std::ostringstream os;
    os << "Q must vanish to order exactly " << m << " at 0";
    throw PreconditionViolation(os.str());
  }
  if (!real_roots(Q.divide_by_power_of_x(m), {-chi.r2, chi.r2}).empty())
    throw PreconditionViolation("Q has a zero in the cutoff support besides x = 0");
  if (W.is_zero()) return;
  const auto wn = vanishing_order(W);
  if (*wn != n) {
    std::ostringstream os;
    os << "W vanishes to order " << *wn << " at 0, expected " << n;
    throw PreconditionViolation(os.str());
  }
}

double omega_scale(int m, int n, double h) {
  return std::pow(h, -static_cast<double>(n + 1) / static_cast<double>(m + 1));
}

}  // namespace

QuadResult omega_tilde(int m, int n, const ComplexPolynomial& W, const Polynomial& Q, double h,
                       const CutoffSpec& chi, const Interval& interval, const AdaptiveOptions& opts) {
  check_omega_preconditions(m, n, W, Q, chi, interval);
  if (W.is_zero()) return {};
  OscIntegrand g{[&](double x) { return chi(x) * W(x); }, Q.antiderivative(), h, {-chi.r2, chi.r2}};
  QuadResult r = integrate_adaptive(g, opts);
  const double s = omega_scale(m, n, h);
  r.value *= s;
  r.error *= s;
  return r;
}

QuadResult omega_tilde_brute_force(int m, int n, const ComplexPolynomial& W, const Polynomial& Q,
                                   double h, const CutoffSpec& chi, const Interval& interval,
                                   const BruteForceOptions& opts) {
  check_omega_preconditions(m, n, W, Q, chi, interval);
  if (W.is_zero()) return {};
  OscIntegrand g{[&](double x) { return chi(x) * W(x); }, Q.antiderivative(), h, {-chi.r2, chi.r2}};
  QuadResult r = brute_force(g, opts);
  const double s = omega_scale(m, n, h);
  r.value *= s;
  r.error *= s;
  return r;
}

QuadResult omega_tilde_cutoff_difference(int m, int n, const ComplexPolynomial& W,
                                         const Polynomial& Q, double h, const CutoffSpec& chi_a,
                                         const CutoffSpec& chi_b, const Interval& interval,
                                         const AdaptiveOptions& opts) {
  check_omega_preconditions(m, n, W, Q, chi_a, interval);
  check_omega_preconditions(m, n, W, Q, chi_b, interval);
  if (W.is_zero()) return {};
  const double r = std::max(chi_a.r2, chi_b.r2);
  OscIntegrand g{[&](double x) { return (chi_a(x) - chi_b(x)) * W(x); }, Q.antiderivative(), h,
                 {-r, r}};
  QuadResult res = integrate_adaptive(g, opts);
  const double s = omega_scale(m, n, h);
  res.value *= s;
  res.error *= s;
  return res;
}

double osc_bound_bracket(int k, int l1, int l2, double sup_a, double sup_xl2_da, double h) {
  const double kp1 = k + 1.0;
  const double e1 = std::max((k - l1) / kp1, 0.0);
  const double e2 = std::max((k - l1 - l2 - 1.0) / kp1, 0.0);
  const double log_factor = (l1 + l2 + 1 == k) ? std::log(1.0 / h) : 1.0;
  return sup_a * std::pow(h, -e1) + sup_xl2_da * log_factor * std::pow(h, -e2);
}

}  // namespace lzdeg
