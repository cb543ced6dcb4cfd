#pragma once

// Reference implementations that share no code with the library: adaptive
// Gauss-Kronrod quadrature for elliptic integrals, Jacobi functions by
// inverting the incomplete integral, and the Weierstrass function by
// integrating its differential equation.

#include <array>
#include <cmath>
#include <algorithm>
#include <functional>
#include <numbers>

namespace oracle {

inline double gk15(const std::function<double(double)>& f, double a, double b, double* err) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wk[7] * fc;
  double g = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double s = f(c - h * xk[i]) + f(c + h * xk[i]);
    k += wk[i] * s;
    if (i % 2 == 1) g += wg[i / 2] * s;
  }
  *err = std::abs((k - g) * h);
  return k * h;
}

// Bisects until the Kronrod-Gauss difference on a piece is below tol relative
// to the piece; the difference overstates the Kronrod error by orders of
// magnitude for analytic integrands.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14, int depth = 0) {
  double err = 0.0;
  const double v = gk15(f, a, b, &err);
  if (err <= tol * std::max(1e-3, std::abs(v)) || depth > 30) return v;
  const double m = 0.5 * (a + b);
  return integrate(f, a, m, tol, depth + 1) + integrate(f, m, b, tol, depth + 1);
}

// F(phi, k) = int_0^phi dtheta / sqrt(1 - k^2 sin^2 theta)
inline double incomplete_f(double phi, double k) {
  return integrate([k](double th) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(th) * std::sin(th)); },
                   0.0, phi);
}

inline double complete_k(double k) { return incomplete_f(std::numbers::pi / 2, k); }

struct Sncndn {
  double sn, cn, dn;
};

// Amplitude am(u) solved from F(am, k) = u by Newton's method.
inline Sncndn jacobi(double u, double k) {
  const double kk = complete_k(k);
  double phi = u * std::numbers::pi / (2.0 * kk);
  for (int i = 0; i < 60; ++i) {
    const double s = std::sin(phi);
    const double step = (incomplete_f(phi, k) - u) * std::sqrt(1.0 - k * k * s * s);
    phi -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(phi))) break;
  }
  const double sn = std::sin(phi);
  return {sn, std::cos(phi), std::sqrt(1.0 - k * k * sn * sn)};
}

// p(z) from p'' = 6 p^2 - g2/2, started from the Laurent series at z0 = 0.05
// (c_k = 3 / ((2k+3)(k-3)) sum c_m c_(k-m)) and advanced with classical RK4.
// Valid before the first real pole.
inline double weierstrass_ode(double z, double g2, double g3, int steps = 200000) {
  const double z0 = 0.05;
  double c[9] = {0, 0, g2 / 20.0, g3 / 28.0, 0, 0, 0, 0, 0};
  for (int k = 4; k <= 8; ++k) {
    double sum = 0.0;
    for (int m = 2; m <= k - 2; ++m) sum += c[m] * c[k - m];
    c[k] = 3.0 * sum / ((2.0 * k + 3.0) * (k - 3.0));
  }
  double p = 1.0 / (z0 * z0);
  double dp = -2.0 / (z0 * z0 * z0);
  for (int k = 2; k <= 8; ++k) {
    p += c[k] * std::pow(z0, 2 * k - 2);
    dp += (2 * k - 2) * c[k] * std::pow(z0, 2 * k - 3);
  }
  const double h = (z - z0) / steps;
  auto acc = [g2](double v) { return 6.0 * v * v - 0.5 * g2; };
  for (int i = 0; i < steps; ++i) {
    const double k1p = dp, k1d = acc(p);
    const double k2p = dp + 0.5 * h * k1d, k2d = acc(p + 0.5 * h * k1p);
    const double k3p = dp + 0.5 * h * k2d, k3d = acc(p + 0.5 * h * k2p);
    const double k4p = dp + h * k3d, k4d = acc(p + h * k3p);
    p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    dp += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  return p;
}

// Real root of 4x^3 - g2 x - g3 by bisection (negative discriminant: one root).
inline double real_root(double g2, double g3) {
  auto f = [&](double x) { return 4 * x * x * x - g2 * x - g3; };
  double lo = -1.0, hi = 1.0;
  while (f(lo) > 0) lo *= 2;
  while (f(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (f(m) < 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

// p(z) = e2 + H (1 + cn) / (1 - cn), cn = cn(2 sqrt(H) z, m), for g2^3 < 27 g3^2.
inline double weierstrass_cn(double z, double g2, double g3) {
  const double e2 = real_root(g2, g3);
  const double H = std::sqrt(3 * e2 * e2 - g2 / 4);
  const double m = 0.5 - 3 * e2 / (4 * H);
  const double cn = jacobi(2 * std::sqrt(H) * z, std::sqrt(m)).cn;
  return e2 + H * (1 + cn) / (1 - cn);
}

// Central difference derivative with Richardson extrapolation.
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-3) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}

}  // namespace oracle
