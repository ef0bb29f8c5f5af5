#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lzdeg::series {

// Truncated power series about 0: s[j] is the coefficient of t^j.

template <class T>
std::vector<T> truncate(std::vector<T> a, std::size_t n) {
  a.resize(n, T{});
  return a;
}

template <class T>
std::vector<T> multiply(const std::vector<T>& a, const std::vector<T>& b, std::size_t n) {
  std::vector<T> c(n, T{});
  for (std::size_t i = 0; i < a.size() && i < n; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// f^alpha for real f with f[0] > 0.
inline std::vector<double> power(const std::vector<double>& f_in, double alpha, std::size_t n) {
  const auto f = truncate(f_in, n);
  if (n == 0) return {};
  if (!(f[0] > 0.0)) throw std::domain_error("series power needs a positive constant term");
  std::vector<double> g(n, 0.0);
  g[0] = std::pow(f[0], alpha);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      s += ((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * f[j] * g[k - j];
    g[k] = s / (static_cast<double>(k) * f[0]);
  }
  return g;
}

/// a(x(t)) where x[0] = 0.
template <class T, class S>
std::vector<T> compose(const std::vector<T>& a, const std::vector<S>& x, std::size_t n) {
  if (!x.empty() && x[0] != S{}) throw std::domain_error("inner series must vanish at 0");
  std::vector<T> out(n, T{});
  // Horner in series arithmetic
  for (std::size_t i = a.size(); i-- > 0;) {
    std::vector<T> next(n, T{});
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 1; q < x.size() && p + q < n; ++q) next[p + q] += out[p] * x[q];
    if (n > 0) next[0] += a[i];
    out = std::move(next);
  }
  return out;
}

/// Compositional inverse of y (y[0] = 0, y[1] != 0), to n terms.
inline std::vector<double> revert(const std::vector<double>& y, std::size_t n) {
  if (y.size() < 2 || y[0] != 0.0 || y[1] == 0.0)
    throw std::domain_error("series reversion needs y(0) = 0, y'(0) != 0");
  std::vector<double> x(n, 0.0);
  if (n < 2) return x;
  x[1] = 1.0 / y[1];
  // Newton-free: fix coefficients order by order from y(x(t)) = t.
  for (std::size_t k = 2; k < n; ++k) {
    const auto yx = compose(y, x, k + 1);
    x[k] = -yx[k] / y[1];
  }
  return x;
}

template <class T>
std::vector<T> derivative(const std::vector<T>& a) {
  if (a.size() <= 1) return {};
  std::vector<T> d(a.size() - 1);
  for (std::size_t j = 1; j < a.size(); ++j) d[j - 1] = a[j] * static_cast<double>(j);
  return d;
}

}  // namespace lzdeg::series
