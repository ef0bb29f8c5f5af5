#pragma once

#include <span>
#include <vector>

#include "lzdeg/polynomial.hpp"

namespace lzdeg {

/// phi(x) - phi(0) = sign * y(x)^k near 0 with y(x) = x phi_tilde(x)^{1/k}.
struct PhaseNormalForm {
  int k = 2;
  int sign = 1;
  double phi0 = 0.0;
  Polynomial phi_tilde;  // sign (phi - phi(0)) / x^k, exact

  double y(double x) const;
  double y_prime(double x) const;
  /// Taylor coefficients of y at 0, n terms.
  std::vector<double> y_series(std::size_t n) const;
};

/// Throws NotDegenerate when k < 2 (or phi is constant) and
/// ExtraStationaryPoint when phi' vanishes elsewhere in the interval.
PhaseNormalForm phase_normal_form(const Polynomial& phi, const Interval& interval = {-1.0, 1.0});

/// a_phi^{(l)}(0), l = 0..N, where a_phi(y(x)) = a(x) / y'(x).
/// `taylor` holds the Taylor coefficients of a at 0 (at least N+1 are used).
std::vector<Complex> a_phi_derivatives(std::span<const Complex> taylor, const PhaseNormalForm& nf,
                                       int N);
std::vector<Complex> a_phi_derivatives(const ComplexPolynomial& a, const PhaseNormalForm& nf, int N);

/// h^{num/den}
struct Rational {
  int num = 0;
  int den = 1;
  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<long>(a.num) * b.den == static_cast<long>(b.num) * a.den;
  }
};

struct DspTerm {
  int l = 0;
  int derivative_order = 0;  // which a_phi derivative enters
  Complex coefficient;       // includes the e^{i phi(0)/h} factor
  Rational h_power;
};

struct DspExpansion {
  std::vector<DspTerm> terms;
  int order_N = 0;
  int k = 2;
  int sign = 1;
  double h = 0.0;
  Complex value;         // partial sum
  Rational remainder;    // exponent of the O(h^.) remainder

  /// Coefficient of the term carrying h^{p}; zero when there is none.
  Complex coefficient_of(Rational p) const;
};

/// Partial sum of the degenerate stationary-phase expansion of
/// integral of a e^{i phi/h} (a compactly supported, equal to its Taylor
/// series `taylor` near 0). Both signs of phi^{(k)}(0) are handled; for a
/// negative sign the expansion is the conjugate of the one for conj(a), -phi.
DspExpansion dsp_expansion(std::span<const Complex> taylor, const Polynomial& phi, double h, int N,
                           const Interval& interval = {-1.0, 1.0});
DspExpansion dsp_expansion(const ComplexPolynomial& a, const Polynomial& phi, double h, int N,
                           const Interval& interval = {-1.0, 1.0});

/// Which derivative of Q supplies the sign in the odd-m branches of eta.
enum class EtaSign {
  AsPrinted,           // sgn Q^{(n)}(0); for m even no sign enters
  LeadingCoefficient,  // sgn Q^{(m)}(0); for m even a factor sgn^n enters
};

/// Three-branch constant: i^n cos((1-mn)pi/(2(m+1))) for m even,
/// exp(sgn i(n+1)pi/(2(m+1))) for m odd and n even,
/// exp(sgn i(n+2)pi/(2(m+1))) for mn odd. `sgn` is used as given.
Complex eta(int m, int n, int sgn);
/// eta_{m,0}: cos(pi/(2(m+1))) for m even, exp(sgn i pi/(2(m+1))) for m odd.
Complex eta_m(int m, int sgn);

/// Closed-form limit of omega_tilde. For mn odd this is the coefficient of
/// h^{1/(m+1)}, with Q^{(m)}(0) in the bracket denominator.
Complex omega_tilde0(int m, int n, const ComplexPolynomial& W, const Polynomial& Q,
                     EtaSign convention = EtaSign::LeadingCoefficient);

/// Leading term of omega_m for contact order m >= 2:
/// 2 eta_m ((m+1)!/|gap^{(m)}(0)|)^{1/(m+1)} Gamma((m+2)/(m+1)).
/// Checked against omega_tilde0(m, 0, 1, V1 - V2). ContactOrderTooLow for m < 2.
Complex omega_m(const Polynomial& V1, const Polynomial& V2);

}  // namespace lzdeg
