#pragma once
#include <utility>

namespace crdctl {

/// Monic depressed cubic  v^3 + beta*v + q = 0.
struct DepressedCubic {
  double beta = 0.0;  // linear coefficient
  double q = 0.0;     // constant coefficient

  double discriminant() const { return q * q / 4.0 + beta * beta * beta / 27.0; }

  /// Floating-point slack for the discriminant sign test. Coefficients built
  /// from provably-nonnegative-discriminant constructions can land slightly
  /// below zero after rounding; anything below -slack is a caller bug.
  double fp_slack() const;

  double eval(double v) const { return ((v * v) + beta) * v + q; }
};

/// General quadratic  a*v^2 + b*v + c = 0 with a != 0.
struct QuadraticCoeffs {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;

  double discriminant() const { return b * b - 4.0 * a * c; }
  double fp_slack() const;
  double eval(double v) const { return (a * v + b) * v + c; }
};

/// Real cube root, defined for negative arguments; odd and monotone.
double signed_cbrt(double x);

/// The single real root of a depressed cubic with nonnegative discriminant,
/// via the classical two-cube-root expression. Continuous in (beta, q) on the
/// closed region discriminant >= 0. Throws std::domain_error when the
/// discriminant is negative beyond floating-point slack.
double cardano_real_root(const DepressedCubic& c);

/// Both real roots, ordered (smaller, larger), computed in the
/// cancellation-free form. Throws std::domain_error on negative discriminant
/// beyond slack, std::invalid_argument if a == 0.
std::pair<double, double> quadratic_roots(const QuadraticCoeffs& qc);

}  // namespace crdctl
