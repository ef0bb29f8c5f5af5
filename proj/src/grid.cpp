#include "lzdeg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lzdeg/quadrature_rules.hpp"

namespace lzdeg {

struct PanelGrid::Rule {
  int p = 0;
  std::vector<double> t, w, bary;
  std::vector<double> legendre_at_nodes;  // P_k(t_j), row j
  std::vector<double> S;                  // integral from -1 to t_i of l_j, row i
  std::vector<double> D;                  // l_j'(t_i), row i

  // integral from -1 to t of each cardinal function
  std::vector<double> integral_weights(double tt) const {
    const auto P = legendre_values(p, tt);
    std::vector<double> out(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      const double* Pj = &legendre_at_nodes[static_cast<std::size_t>(j * p)];
      double s = 0.5 * (tt + 1.0);
      for (int k = 1; k < p; ++k)
        s += 0.5 * Pj[k] * (P[static_cast<std::size_t>(k + 1)] - P[static_cast<std::size_t>(k - 1)]);
      out[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * s;
    }
    return out;
  }
};

std::shared_ptr<const PanelGrid::Rule> PanelGrid::rule_for(int p) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Rule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(p); it != cache.end()) return it->second;

  auto r = std::make_shared<Rule>();
  r->p = p;
  const auto gl = gauss_legendre(p);
  r->t = gl.nodes;
  r->w = gl.weights;
  const auto pu = static_cast<std::size_t>(p);
  r->legendre_at_nodes.resize(pu * pu);
  for (std::size_t j = 0; j < pu; ++j) {
    const auto P = legendre_values(p - 1, r->t[j]);
    for (std::size_t k = 0; k < pu; ++k) r->legendre_at_nodes[j * pu + k] = P[k];
  }
  r->bary.resize(pu);
  for (std::size_t j = 0; j < pu; ++j) {
    double prod = 1.0;
    for (std::size_t i = 0; i < pu; ++i)
      if (i != j) prod *= (r->t[j] - r->t[i]);
    r->bary[j] = 1.0 / prod;
  }
  r->S.resize(pu * pu);
  for (std::size_t i = 0; i < pu; ++i) {
    const auto row = r->integral_weights(r->t[i]);
    std::copy(row.begin(), row.end(), r->S.begin() + static_cast<std::ptrdiff_t>(i * pu));
  }
  r->D.assign(pu * pu, 0.0);
  for (std::size_t i = 0; i < pu; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < pu; ++j) {
      if (i == j) continue;
      const double d = (r->bary[j] / r->bary[i]) / (r->t[i] - r->t[j]);
      r->D[i * pu + j] = d;
      diag -= d;
    }
    r->D[i * pu + i] = diag;
  }
  cache[p] = r;
  return r;
}

PanelGrid::PanelGrid(Interval interval, std::size_t panels, int nodes_per_panel)
    : interval_(interval), panels_(panels), p_(nodes_per_panel) {
  if (panels == 0 || nodes_per_panel < 2 || !(interval.hi > interval.lo))
    throw std::invalid_argument("PanelGrid needs a nonempty interval, >= 1 panel and >= 2 nodes");
  rule_ = rule_for(p_);
  width_ = interval.length() / static_cast<double>(panels);
  x_.resize(panels * static_cast<std::size_t>(p_));
  const double half = 0.5 * width_;
  for (std::size_t k = 0; k < panels; ++k) {
    const double c = interval.lo + (static_cast<double>(k) + 0.5) * width_;
    for (int j = 0; j < p_; ++j)
      x_[k * static_cast<std::size_t>(p_) + static_cast<std::size_t>(j)] =
          c + half * rule_->t[static_cast<std::size_t>(j)];
  }
}

PanelGrid PanelGrid::with_spacing(Interval interval, double spacing, int nodes_per_panel) {
  const double panel = spacing * nodes_per_panel;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(interval.length() / panel)));
  return PanelGrid(interval, n, nodes_per_panel);
}

double PanelGrid::max_gap() const {
  double g = (1.0 - rule_->t.back()) + (rule_->t.front() + 1.0);
  for (std::size_t j = 0; j + 1 < rule_->t.size(); ++j) g = std::max(g, rule_->t[j + 1] - rule_->t[j]);
  return 0.5 * width_ * g;
}

std::size_t PanelGrid::panel_of(double x) const {
  const double k = std::floor((x - interval_.lo) / width_);
  if (k <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(k), panels_ - 1);
}

std::vector<Complex> PanelGrid::cumulative(std::span<const Complex> f) const {
  const auto pu = static_cast<std::size_t>(p_);
  std::vector<Complex> F(f.size());
  const double half = 0.5 * width_;
  Complex base = 0.0;
  for (std::size_t k = 0; k < panels_; ++k) {
    const Complex* fk = f.data() + k * pu;
    for (std::size_t i = 0; i < pu; ++i) {
      const double* Si = &rule_->S[i * pu];
      Complex s = 0.0;
      for (std::size_t j = 0; j < pu; ++j) s += Si[j] * fk[j];
      F[k * pu + i] = base + half * s;
    }
    Complex tot = 0.0;
    for (std::size_t j = 0; j < pu; ++j) tot += rule_->w[j] * fk[j];
    base += half * tot;
  }
  return F;
}

Complex PanelGrid::total(std::span<const Complex> f) const {
  const auto pu = static_cast<std::size_t>(p_);
  Complex base = 0.0;
  for (std::size_t k = 0; k < panels_; ++k) {
    Complex tot = 0.0;
    for (std::size_t j = 0; j < pu; ++j) tot += rule_->w[j] * f[k * pu + j];
    base += 0.5 * width_ * tot;
  }
  return base;
}

Complex PanelGrid::integral_to(std::span<const Complex> f, std::span<const Complex> F, double x) const {
  const auto pu = static_cast<std::size_t>(p_);
  const std::size_t k = panel_of(x);
  const double half = 0.5 * width_;
  const double c = interval_.lo + (static_cast<double>(k) + 0.5) * width_;
  const Complex* fk = f.data() + k * pu;
  // value at the panel's left edge
  Complex s0 = 0.0;
  for (std::size_t j = 0; j < pu; ++j) s0 += rule_->S[j] * fk[j];
  const Complex start = F[k * pu] - half * s0;
  const double t = std::clamp((x - c) / half, -1.0, 1.0);
  const auto wts = rule_->integral_weights(t);
  Complex s = 0.0;
  for (std::size_t j = 0; j < pu; ++j) s += wts[j] * fk[j];
  return start + half * s;
}

Complex PanelGrid::interpolate(std::span<const Complex> f, double x) const {
  const auto pu = static_cast<std::size_t>(p_);
  const std::size_t k = panel_of(x);
  const double half = 0.5 * width_;
  const double c = interval_.lo + (static_cast<double>(k) + 0.5) * width_;
  const double t = (x - c) / half;
  const Complex* fk = f.data() + k * pu;
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < pu; ++j) {
    const double d = t - rule_->t[j];
    if (d == 0.0) return fk[j];
    const double q = rule_->bary[j] / d;
    num += q * fk[j];
    den += q;
  }
  return num / den;
}

std::vector<Complex> PanelGrid::derivative(std::span<const Complex> f) const {
  const auto pu = static_cast<std::size_t>(p_);
  std::vector<Complex> d(f.size());
  const double scale = 2.0 / width_;
  for (std::size_t k = 0; k < panels_; ++k) {
    const Complex* fk = f.data() + k * pu;
    for (std::size_t i = 0; i < pu; ++i) {
      const double* Di = &rule_->D[i * pu];
      Complex s = 0.0;
      for (std::size_t j = 0; j < pu; ++j) s += Di[j] * fk[j];
      d[k * pu + i] = scale * s;
    }
  }
  return d;
}

}  // namespace lzdeg
