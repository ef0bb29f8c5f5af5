#include "lzdeg/statphase.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lzdeg/errors.hpp"
#include "lzdeg/model.hpp"
#include "lzdeg/series.hpp"

namespace lzdeg {

namespace {

using std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

Complex i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::vector<Complex> taylor_of(const ComplexPolynomial& a) {
  std::vector<Complex> t(static_cast<std::size_t>(std::max(a.degree(), -1) + 1));
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = a.coefficient(static_cast<int>(j));
  return t;
}

}  // namespace

double PhaseNormalForm::y(double x) const { return x * std::pow(phi_tilde(x), 1.0 / k); }

double PhaseNormalForm::y_prime(double x) const {
  const double ft = phi_tilde(x);
  const double root = std::pow(ft, 1.0 / k);
  return root + x / k * root / ft * phi_tilde.derivative_at(x, 1);
}

std::vector<double> PhaseNormalForm::y_series(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  std::vector<double> ft(phi_tilde.coefficients().begin(), phi_tilde.coefficients().end());
  const auto g = series::power(ft, 1.0 / k, n - 1);
  for (std::size_t j = 1; j < n; ++j) out[j] = g[j - 1];
  return out;
}

PhaseNormalForm phase_normal_form(const Polynomial& phi, const Interval& interval) {
  PhaseNormalForm nf;
  nf.phi0 = phi(0.0);
  const Polynomial d = phi - Polynomial::constant(nf.phi0);
  const auto k = vanishing_order(d);
  if (!k) throw NotDegenerate("phase is constant");
  if (*k < 2) throw NotDegenerate("phi'(0) != 0: no stationary point at 0");
  nf.k = *k;
  nf.sign = sign_of(d.coefficient(*k));
  nf.phi_tilde = static_cast<double>(nf.sign) * d.divide_by_power_of_x(*k);
  const Polynomial reduced = phi.derivative().divide_by_power_of_x(*k - 1);
  const auto extra = real_roots(reduced, interval);
  if (!extra.empty()) {
    std::ostringstream os;
    os << "phi' also vanishes at x = " << extra.front();
    throw ExtraStationaryPoint(os.str());
  }
  return nf;
}

std::vector<Complex> a_phi_derivatives(std::span<const Complex> taylor, const PhaseNormalForm& nf,
                                       int N) {
  if (N < 0) return {};
  const auto n = static_cast<std::size_t>(N) + 1;
  const auto ys = nf.y_series(n + 1);
  const auto xs = series::revert(ys, n + 1);
  std::vector<Complex> a(taylor.begin(), taylor.begin() + static_cast<std::ptrdiff_t>(std::min(taylor.size(), n)));
  const auto a_of_x = series::compose(a, xs, n);
  const auto dx = series::derivative(xs);
  std::vector<Complex> dxc(dx.begin(), dx.end());
  const auto aphi = series::multiply(a_of_x, dxc, n);
  std::vector<Complex> out(n);
  for (std::size_t l = 0; l < n; ++l) out[l] = aphi[l] * factorial(static_cast<int>(l));
  return out;
}

std::vector<Complex> a_phi_derivatives(const ComplexPolynomial& a, const PhaseNormalForm& nf, int N) {
  const auto t = taylor_of(a);
  return a_phi_derivatives(t, nf, N);
}

Complex DspExpansion::coefficient_of(Rational p) const {
  for (const auto& t : terms)
    if (t.h_power == p) return t.coefficient;
  return {0.0, 0.0};
}

DspExpansion dsp_expansion(std::span<const Complex> taylor, const Polynomial& phi, double h, int N,
                           const Interval& interval) {
  if (!(h > 0.0)) throw PreconditionViolation("h must be positive");
  if (N < 0) throw PreconditionViolation("N must be nonnegative");
  const auto nf = phase_normal_form(phi, interval);
  const int k = nf.k;
  DspExpansion out;
  out.order_N = N;
  out.k = k;
  out.sign = nf.sign;
  out.h = h;

  // Positive-sign expansion of b = a (sign +) or conj(a) (sign -).
  std::vector<Complex> b(taylor.begin(), taylor.end());
  if (nf.sign < 0)
    for (auto& c : b) c = std::conj(c);
  const bool odd = (k % 2 == 1);
  const int max_derivative = odd ? N - 1 : 2 * N - 2;
  const auto d = a_phi_derivatives(b, nf, std::max(max_derivative, 0));
  const Complex carrier = std::polar(1.0, nf.phi0 / h);

  for (int l = 0; l < N; ++l) {
    DspTerm t;
    t.l = l;
    Complex c;
    if (odd) {
      t.derivative_order = l;
      t.h_power = {l + 1, k};
      c = (2.0 / k) * i_pow(l) * d[static_cast<std::size_t>(l)] / factorial(l) *
          std::tgamma((l + 1.0) / k) * std::cos((1.0 - (k - 1.0) * l) * pi / (2.0 * k));
    } else {
      t.derivative_order = 2 * l;
      t.h_power = {2 * l + 1, k};
      c = (2.0 / k) * d[static_cast<std::size_t>(2 * l)] / factorial(2 * l) *
          std::tgamma((2.0 * l + 1.0) / k) * std::polar(1.0, pi * (2.0 * l + 1.0) / (2.0 * k));
    }
    if (nf.sign < 0) c = std::conj(c);
    t.coefficient = carrier * c;
    out.value += t.coefficient * std::pow(h, t.h_power.value());
    out.terms.push_back(t);
  }
  out.remainder = odd ? Rational{N + 1, k} : Rational{2 * N + 1, k};
  return out;
}

DspExpansion dsp_expansion(const ComplexPolynomial& a, const Polynomial& phi, double h, int N,
                           const Interval& interval) {
  const auto t = taylor_of(a);
  return dsp_expansion(t, phi, h, N, interval);
}

Complex eta(int m, int n, int sgn) {
  const double md = m;
  if (m % 2 == 0) return i_pow(n) * std::cos((1.0 - md * n) * pi / (2.0 * (md + 1.0)));
  const int shift = (n % 2 == 0) ? n + 1 : n + 2;
  return std::polar(1.0, sgn * shift * pi / (2.0 * (md + 1.0)));
}

Complex eta_m(int m, int sgn) { return eta(m, 0, sgn); }

Complex omega_tilde0(int m, int n, const ComplexPolynomial& W, const Polynomial& Q,
                     EtaSign convention) {
  if (m < 1 || n < 0) throw PreconditionViolation("need m >= 1 and n >= 0");
  const auto qm = vanishing_order(Q);
  if (!qm || *qm != m) {
    std::ostringstream os;
    os << "Q must vanish to order exactly " << m << " at 0";
    throw PreconditionViolation(os.str());
  }
  if (W.is_zero()) return {0.0, 0.0};
  const auto wn = vanishing_order(W);
  if (*wn != n) {
    std::ostringstream os;
    os << "W vanishes to order " << *wn << " at 0, expected " << n;
    throw PreconditionViolation(os.str());
  }
  const double lead = Q.derivative_at_zero(m);
  const int sgn_lead = sign_of(lead);
  const int sgn = convention == EtaSign::AsPrinted ? sign_of(Q.derivative_at_zero(n)) : sgn_lead;
  Complex e = eta(m, n, sgn);
  if (m % 2 == 0 && convention == EtaSign::LeadingCoefficient && sgn_lead < 0 && n % 2 == 1) e = -e;
  const double md = m;
  const double base = factorial(m + 1) / std::abs(lead);
  if (m % 2 == 1 && n % 2 == 1) {
    const Complex bracket =
        W.derivative_at_zero(n + 1) - (n + 1.0) * (n + 2.0) * Q.derivative_at_zero(m + 1) /
                                          ((md + 1.0) * (md + 2.0) * lead) * W.derivative_at_zero(n);
    return 2.0 * e / ((md + 1.0) * factorial(n + 1)) * std::pow(base, (n + 2.0) / (md + 1.0)) *
           std::tgamma((n + 2.0) / (md + 1.0)) * bracket;
  }
  return 2.0 * e * W.derivative_at_zero(n) / ((md + 1.0) * factorial(n)) *
         std::pow(base, (n + 1.0) / (md + 1.0)) * std::tgamma((n + 1.0) / (md + 1.0));
}

Complex omega_m(const Polynomial& V1, const Polynomial& V2) {
  const Polynomial gap = V1 - V2;
  const auto m = vanishing_order(gap);
  if (!m) throw PreconditionViolation("V1 - V2 vanishes identically");
  if (*m < 2) {
    std::ostringstream os;
    os << "contact order " << *m << " < 2";
    throw ContactOrderTooLow(os.str());
  }
  const double lead = gap.derivative_at_zero(*m);
  const double md = *m;
  const Complex value = 2.0 * eta_m(*m, sign_of(lead)) *
                        std::pow(factorial(*m + 1) / std::abs(lead), 1.0 / (md + 1.0)) *
                        std::tgamma((md + 2.0) / (md + 1.0));
  const Complex check = omega_tilde0(*m, 0, Polynomial{1.0}, gap);
  if (std::abs(value - check) > 1e-12 * std::abs(value))
    throw std::logic_error("omega_m disagrees with omega_tilde0(m, 0, 1, V1 - V2)");
  return value;
}

}  // namespace lzdeg
