#include "crdctl/rootsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crdctl {

double DepressedCubic::fp_slack() const {
  return 1e-12 * std::max({1.0, q * q, std::abs(beta * beta * beta)});
}

double QuadraticCoeffs::fp_slack() const {
  return 1e-12 * std::max({1.0, b * b, std::abs(4.0 * a * c)});
}

double signed_cbrt(double x) { return std::cbrt(x); }

double cardano_real_root(const DepressedCubic& c) {
  double delta = c.discriminant();
  if (delta < -c.fp_slack()) {
    throw std::domain_error("cardano_real_root: negative discriminant");
  }
  delta = std::max(delta, 0.0);

  const double half = -c.q / 2.0;
  const double rad = std::sqrt(delta);

  // v = cbrt(half + rad) + cbrt(half - rad). The two radicands multiply to
  // -beta^3/27, so the smaller-magnitude cube root is recovered as
  // -beta/(3u) instead of from the cancellation-prone difference.
  const double big = (half >= 0.0) ? half + rad : half - rad;
  const double u = signed_cbrt(big);
  if (u == 0.0) return 0.0;  // only when beta = q = 0
  return u - c.beta / (3.0 * u);
}

std::pair<double, double> quadratic_roots(const QuadraticCoeffs& qc) {
  if (qc.a == 0.0) {
    throw std::invalid_argument("quadratic_roots: leading coefficient is zero");
  }
  double disc = qc.discriminant();
  if (disc < -qc.fp_slack()) {
    throw std::domain_error("quadratic_roots: negative discriminant");
  }
  disc = std::max(disc, 0.0);

  const double rad = std::sqrt(disc);
  // q-trick: fold the sign of b into the radical so b and rad never cancel.
  const double qq = -0.5 * (qc.b + std::copysign(rad, qc.b));
  double r1, r2;
  if (qq == 0.0) {
    r1 = 0.0;
    r2 = -qc.b / qc.a;  // b == 0 here unless disc == 0 as well
  } else {
    r1 = qq / qc.a;
    r2 = qc.c / qq;
  }
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace crdctl
