#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace lzdeg {

using Complex = std::complex<double>;

/// Closed interval [lo, hi].
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool has_interior_point(double x) const { return lo < x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Real polynomial in x, coefficients in ascending degree. Derivatives and
/// the antiderivative are exact coefficient operations.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial monomial(double coeff, int degree);
  static Polynomial constant(double value) { return Polynomial{value}; }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const double> coefficients() const { return c_; }
  double coefficient(int k) const;

  double operator()(double x) const;
  /// k-th derivative evaluated at x.
  double derivative_at(double x, int k) const;
  /// f^{(k)}(0) = k! c_k.
  double derivative_at_zero(int k) const;

  Polynomial derivative(int k = 1) const;
  /// The antiderivative vanishing at 0.
  Polynomial antiderivative() const;
  /// Exact division by x^k. Requires the k lowest coefficients to vanish.
  Polynomial divide_by_power_of_x(int k) const;

  /// Largest |c_k|; 0 for the zero polynomial.
  double coefficient_scale() const;
  /// max over [lo, hi] of |f|, from endpoints and critical points.
  double max_abs_on(const Interval& iv) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> c_;
};

/// All real roots of p in [lo, hi], ascending. Roots of even multiplicity are
/// detected at critical points whose value is zero to rounding.
std::vector<double> real_roots(const Polynomial& p, const Interval& iv);

/// Complex-valued polynomial held as a pair of real polynomials.
struct ComplexPolynomial {
  Polynomial re;
  Polynomial im;

  ComplexPolynomial() = default;
  ComplexPolynomial(Polynomial real_part) : re(std::move(real_part)) {}  // NOLINT: implicit by design of presets
  ComplexPolynomial(Polynomial real_part, Polynomial imag_part)
      : re(std::move(real_part)), im(std::move(imag_part)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  Complex operator()(double x) const { return {re(x), im(x)}; }
  Complex derivative_at_zero(int k) const {
    return {re.derivative_at_zero(k), im.derivative_at_zero(k)};
  }
  Complex coefficient(int k) const { return {re.coefficient(k), im.coefficient(k)}; }
  int degree() const { return std::max(re.degree(), im.degree()); }
  ComplexPolynomial conj() const { return {re, -im}; }
  ComplexPolynomial operator-() const { return {-re, -im}; }
  double max_abs_on(const Interval& iv) const;
  friend bool operator==(const ComplexPolynomial&, const ComplexPolynomial&) = default;
};

}  // namespace lzdeg
