#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rdexact/elliptic.hpp"
#include "rdexact/error.hpp"

namespace rdexact::elliptic {

namespace {

struct LatticeData {
  double half_period;  // real half period omega
  double min_distance;  // shortest nonzero lattice vector
};

double polish_root(double x, double g2, double g3) {
  for (int i = 0; i < 4; ++i) {
    const double f = 4.0 * x * x * x - g2 * x - g3;
    const double df = 12.0 * x * x - g2;
    if (df == 0.0) break;
    const double step = f / df;
    x -= step;
    if (std::abs(step) <= 1e-17 * std::abs(x)) break;
  }
  return x;
}

double quarter_period_for_parameter(double m) {
  return complete_elliptic_k(Modulus(std::sqrt(std::clamp(m, 0.0, 1.0))));
}

LatticeData solve_lattice(double g2, double g3, double disc) {
  // Roots of 4x^3 - g2 x - g3 written as x^3 + p x + q.
  const double p = -g2 / 4.0;
  const double q = -g3 / 4.0;
  if (disc < 0.0) {
    const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    double e2 = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
    e2 = polish_root(e2, g2, g3);
    const double h = std::sqrt(3.0 * e2 * e2 - g2 / 4.0);
    const double m = 0.5 - 3.0 * e2 / (4.0 * h);
    const double omega = quarter_period_for_parameter(m) / std::sqrt(h);
    const double omega_im = quarter_period_for_parameter(1.0 - m) / std::sqrt(h);
    // Lattice spanned by 2 omega and omega + i omega'.
    return {omega, std::min(2.0 * omega, std::hypot(omega, omega_im))};
  }
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double theta = std::acos(std::clamp(3.0 * q / (p * r), -1.0, 1.0)) / 3.0;
  std::array<double, 3> e{};
  for (int i = 0; i < 3; ++i) {
    e[i] = polish_root(r * std::cos(theta - 2.0 * std::numbers::pi * i / 3.0), g2, g3);
  }
  std::sort(e.begin(), e.end(), std::greater<>());
  const double span = e[0] - e[2];
  const double m = (e[1] - e[2]) / span;
  const double omega = quarter_period_for_parameter(m) / std::sqrt(span);
  const double omega_im = quarter_period_for_parameter(1.0 - m) / std::sqrt(span);
  return {omega, 2.0 * std::min(omega, omega_im)};
}

}  // namespace

Weierstrass::Weierstrass(WeierstrassInvariants inv) : inv_(inv) {
  if (!std::isfinite(inv.g2) || !std::isfinite(inv.g3)) {
    throw DomainError("Weierstrass invariants must be finite");
  }
  if (inv.g2 == 0.0 && inv.g3 == 0.0) {
    degenerate_ = true;
    return;
  }
  const double disc = inv.discriminant();
  const double scale = std::abs(inv.g2 * inv.g2 * inv.g2) + 27.0 * inv.g3 * inv.g3;
  if (std::abs(disc) <= 1e-13 * scale) {
    throw DomainError("Weierstrass lattice degenerates (g2^3 = 27 g3^2) for g2 = " +
                      std::to_string(inv.g2) + ", g3 = " + std::to_string(inv.g3));
  }
  const LatticeData lat = solve_lattice(inv.g2, inv.g3, disc);
  half_period_ = lat.half_period;
  seed_radius_ = lat.min_distance / 2.0;

  laurent_[2] = inv.g2 / 20.0;
  laurent_[3] = inv.g3 / 28.0;
  for (int k = 4; k <= kLaurentTerms; ++k) {
    double sum = 0.0;
    for (int m = 2; m <= k - 2; ++m) sum += laurent_[m] * laurent_[k - m];
    laurent_[k] = 3.0 * sum / ((2.0 * k + 1.0) * (k - 3.0));
  }
}

WeierstrassValue Weierstrass::seed(double z) const {
  const double z2 = z * z;
  double p = 0.0;
  double dp = 0.0;
  for (int k = kLaurentTerms; k >= 2; --k) {
    p = p * z2 + laurent_[k];
    dp = dp * z2 + (2.0 * k - 2.0) * laurent_[k];
  }
  // p holds sum c_k z^(2k-4), dp holds sum (2k-2) c_k z^(2k-4).
  return {1.0 / z2 + p * z2, -2.0 / (z2 * z) + dp * z};
}

std::optional<WeierstrassValue> Weierstrass::operator()(double z) const {
  if (!std::isfinite(z)) throw DomainError("Weierstrass argument must be finite");
  const double sign = z < 0.0 ? -1.0 : 1.0;
  double a = std::abs(z);
  if (degenerate_) {
    if (a < kPoleThreshold) return std::nullopt;
    return WeierstrassValue{1.0 / (a * a), sign * -2.0 / (a * a * a)};
  }
  const double period = 2.0 * half_period_;
  a = std::fmod(a, period);
  double reflect = 1.0;
  if (a > half_period_) {
    a = period - a;
    reflect = -1.0;
  }
  if (a < kPoleThreshold) return std::nullopt;

  int doublings = 0;
  while (a > seed_radius_) {
    a *= 0.5;
    ++doublings;
  }
  WeierstrassValue v = seed(a);
  const double half_g2 = 0.5 * inv_.g2;
  for (int i = 0; i < doublings; ++i) {
    const double q = (6.0 * v.p * v.p - half_g2) / v.dp;
    const double p2 = 0.25 * q * q - 2.0 * v.p;
    const double dp2 = 0.25 * q * (12.0 * v.p - q * q) - v.dp;
    v = {p2, dp2};
  }
  v.dp *= sign * reflect;
  return v;
}

std::optional<WeierstrassValue> weierstrass_p(double z, WeierstrassInvariants inv) {
  return Weierstrass(inv)(z);
}

}  // namespace rdexact::elliptic
