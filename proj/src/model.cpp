#include "lzdeg/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lzdeg/errors.hpp"

namespace lzdeg {

namespace {

std::optional<int> first_significant(int degree, auto&& magnitude_at, double tol) {
  double scale = 0.0;
  for (int k = 0; k <= degree; ++k) scale = std::max(scale, magnitude_at(k));
  if (scale == 0.0) return std::nullopt;
  for (int k = 0; k <= degree; ++k)
    if (magnitude_at(k) > tol * scale) return k;
  return std::nullopt;
}

}  // namespace

std::optional<int> vanishing_order(const Polynomial& f, double tol) {
  return first_significant(
      f.degree(), [&](int k) { return std::abs(f.coefficient(k)); }, tol);
}

std::optional<int> vanishing_order(const ComplexPolynomial& f, double tol) {
  return first_significant(
      f.degree(), [&](int k) { return std::abs(f.coefficient(k)); }, tol);
}

SystemSpec build_system(Polynomial V1, Polynomial V2, ComplexPolynomial U1, ComplexPolynomial U2,
                        double eps1, double eps2, double h, Interval interval, CutoffSpec cutoff,
                        double tol) {
  if (!interval.has_interior_point(0.0)) {
    std::ostringstream os;
    os << "interval [" << interval.lo << ", " << interval.hi << "] must contain 0 in its interior";
    throw BadInterval(os.str());
  }
  if (!(h > 0.0)) throw PreconditionViolation("h must be positive");
  if (!(eps1 >= 0.0 && eps2 >= 0.0)) throw PreconditionViolation("eps1, eps2 must be nonnegative");
  cutoff.validate(interval);

  const Polynomial gap = V1 - V2;
  const auto m = vanishing_order(gap, tol);
  if (!m) throw DegenerateModel("V1 - V2 vanishes identically");
  if (*m < 1) throw DegenerateModel("V1(0) != V2(0): there is no crossing at x = 0");

  // V1 - V2 = x^m q(x) with q(0) != 0; any root of q in I is a second crossing.
  std::vector<double> low(gap.coefficients().begin(), gap.coefficients().end());
  for (int k = 0; k < *m; ++k) low[static_cast<std::size_t>(k)] = 0.0;
  const Polynomial q = Polynomial(low).divide_by_power_of_x(*m);
  const auto extra = real_roots(q, interval);
  if (!extra.empty()) {
    std::ostringstream os;
    os << "V1 - V2 has an additional zero in the interval at x = " << extra.front();
    throw DegenerateModel(os.str());
  }

  const auto n1 = vanishing_order(U1, tol);
  const auto n2 = vanishing_order(U2, tol);
  if (!n1 || !n2) throw DegenerateModel("coupling U1 or U2 vanishes identically");

  SystemSpec spec;
  spec.V1 = std::move(V1);
  spec.V2 = std::move(V2);
  spec.U1 = std::move(U1);
  spec.U2 = std::move(U2);
  spec.eps1 = eps1;
  spec.eps2 = eps2;
  spec.h = h;
  spec.interval = interval;
  spec.cutoff = cutoff;
  spec.geometry.V0 = spec.V1(0.0);
  spec.geometry.rho0 = {0.0, -spec.geometry.V0};
  spec.geometry.m = *m;
  spec.geometry.leading_gap = gap.derivative_at_zero(*m);
  spec.n1 = *n1;
  spec.n2 = *n2;
  return spec;
}

SystemSpec with_parameters(const SystemSpec& spec, double eps1, double eps2, double h) {
  if (!(h > 0.0)) throw PreconditionViolation("h must be positive");
  if (!(eps1 >= 0.0 && eps2 >= 0.0)) throw PreconditionViolation("eps1, eps2 must be nonnegative");
  SystemSpec out = spec;
  out.eps1 = eps1;
  out.eps2 = eps2;
  out.h = h;
  return out;
}

double ScaleParams::mu_k(int k) const {
  return eps_tilde * std::pow(h, -static_cast<double>(k) / static_cast<double>(k + 1));
}

double ScaleParams::mu_ml(int m_order, double l) const {
  const double two_l_plus_1 = 2.0 * l + 1.0;
  const double md = static_cast<double>(m_order);
  if (two_l_plus_1 < md) return eps_tilde * std::pow(h, -(md - l) / (md + 1.0));
  const double log_factor = (two_l_plus_1 == md) ? std::sqrt(std::log(1.0 / h)) : 1.0;
  return eps_tilde / std::sqrt(h) * log_factor;
}

ScaleParams scale_params(const SystemSpec& spec) {
  ScaleParams p;
  p.h = spec.h;
  p.m = spec.m();
  p.eps_tilde = std::sqrt(spec.eps1 * spec.eps2);
  p.n_tilde = 0.5 * (spec.n1 + spec.n2);
  const double md = p.m;
  p.nu1 = (md - spec.n1 - parity(p.m * spec.n1)) / (md + 1.0);
  p.nu2 = (md - spec.n2 - parity(p.m * spec.n2)) / (md + 1.0);
  p.zeta1 = std::pow(spec.h, -1.0 - p.nu1);
  p.zeta2 = std::pow(spec.h, -1.0 - p.nu2);
  // Same as (mu_{m, n_tilde} / eps_tilde)^2 but finite when eps_tilde = 0.
  const double excess = std::max((md - 2.0 * p.n_tilde - 1.0) / (md + 1.0), 0.0);
  const double log_power = (2.0 * p.n_tilde + 1.0 == md) ? 1.0 : 0.0;
  p.zeta = std::pow(std::log(1.0 / spec.h), log_power) * std::pow(spec.h, -excess - 1.0);
  return p;
}

Regime classify_regime(const SystemSpec& spec, RegimeThresholds thresholds) {
  const double mu = scale_params(spec).mu_m();
  if (mu < thresholds.low) return Regime::NonCoupled;
  if (mu > thresholds.high) return Regime::Coupled;
  return Regime::Marginal;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::NonCoupled: return "NonCoupled";
    case Regime::Coupled: return "Coupled";
    case Regime::Marginal: return "Marginal";
  }
  return "?";
}

}  // namespace lzdeg
