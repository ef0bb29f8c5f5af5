#include "lzdeg/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lzdeg {

namespace {

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

// Magnitude used to decide whether p(x) is zero up to rounding.
double evaluation_scale(const Polynomial& p, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (double c : p.coefficients()) {
    s += std::abs(c) * xp;
    xp *= std::abs(x);
  }
  return s;
}

double bisect_root(const Polynomial& p, double a, double b) {
  double fa = p(a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(double coeff, int degree) {
  if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::coefficient(int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return c_[static_cast<std::size_t>(k)];
}

double Polynomial::operator()(double x) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

double Polynomial::derivative_at(double x, int k) const {
  if (k == 0) return (*this)(x);
  double r = 0.0;
  for (int j = degree(); j >= k; --j) r = r * x + c_[static_cast<std::size_t>(j)] * falling_factorial(j, k);
  return r;
}

double Polynomial::derivative_at_zero(int k) const {
  return coefficient(k) * falling_factorial(k, k);
}

Polynomial Polynomial::derivative(int k) const {
  if (k <= 0) return *this;
  if (degree() < k) return {};
  std::vector<double> d(static_cast<std::size_t>(degree() - k + 1));
  for (int j = k; j <= degree(); ++j)
    d[static_cast<std::size_t>(j - k)] = c_[static_cast<std::size_t>(j)] * falling_factorial(j, k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (is_zero()) return {};
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t j = 0; j < c_.size(); ++j) a[j + 1] = c_[j] / static_cast<double>(j + 1);
  return Polynomial(std::move(a));
}

Polynomial Polynomial::divide_by_power_of_x(int k) const {
  if (k <= 0) return *this;
  for (int j = 0; j < std::min(k, degree() + 1); ++j)
    if (c_[static_cast<std::size_t>(j)] != 0.0)
      throw std::invalid_argument("polynomial is not divisible by x^k");
  if (degree() < k) return {};
  return Polynomial(std::vector<double>(c_.begin() + k, c_.end()));
}

double Polynomial::coefficient_scale() const {
  double s = 0.0;
  for (double c : c_) s = std::max(s, std::abs(c));
  return s;
}

double Polynomial::max_abs_on(const Interval& iv) const {
  double m = std::max(std::abs((*this)(iv.lo)), std::abs((*this)(iv.hi)));
  for (double x : real_roots(derivative(), iv)) m = std::max(m, std::abs((*this)(x)));
  return m;
}

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0 * b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c(p.c_);
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

std::vector<double> real_roots(const Polynomial& p, const Interval& iv) {
  std::vector<double> roots;
  if (p.degree() <= 0) return roots;
  if (p.degree() == 1) {
    const double r = -p.coefficient(0) / p.coefficient(1);
    if (iv.contains(r)) roots.push_back(r);
    return roots;
  }
  // p is monotone between consecutive critical points.
  std::vector<double> knots{iv.lo};
  for (double c : real_roots(p.derivative(), iv))
    if (c > knots.back()) knots.push_back(c);
  if (iv.hi > knots.back()) knots.push_back(iv.hi);

  constexpr double kZeroTol = 1e-13;
  auto is_zero_at = [&](double x) { return std::abs(p(x)) <= kZeroTol * evaluation_scale(p, x); };
  auto push = [&](double r) {
    if (roots.empty() || std::abs(r - roots.back()) > 1e-12 * std::max(1.0, std::abs(r)))
      roots.push_back(r);
  };

  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (is_zero_at(knots[i])) push(knots[i]);
    if (i + 1 == knots.size()) break;
    const double a = knots[i];
    const double b = knots[i + 1];
    const double fa = p(a);
    const double fb = p(b);
    if (!is_zero_at(a) && !is_zero_at(b) && ((fa < 0) != (fb < 0))) push(bisect_root(p, a, b));
  }
  return roots;
}

double ComplexPolynomial::max_abs_on(const Interval& iv) const {
  return std::sqrt((re * re + im * im).max_abs_on(iv));
}

}  // namespace lzdeg
