#include "rdexact/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdexact/elliptic.hpp"
#include "rdexact/error.hpp"

namespace rdexact::chain {

namespace {

const elliptic::Modulus& modulus() {
  static const elliptic::Modulus m(kModulus);
  return m;
}

std::optional<PhiValue> plain_element(int n, double y) {
  const auto j = elliptic::jacobi(y, modulus());
  if (j.at_pole()) return std::nullopt;
  PhiValue v{j.dn / j.sn, -j.cn / (j.sn * j.sn)};
  double c = -0.25;
  for (int i = 0; i < n; ++i) {
    if (std::abs(v.phi) < kZeroThreshold) return std::nullopt;
    const double p2 = v.phi * v.phi;
    v = {v.dphi / v.phi, (p2 * p2 - c) / p2};
    c *= -4.0;
    if (!std::isfinite(v.phi) || !std::isfinite(v.dphi)) return std::nullopt;
  }
  return v;
}

}  // namespace

const char* kind_name(ChainKind kind) {
  switch (kind) {
    case ChainKind::plain: return "u";
    case ChainKind::tilde: return "tilde";
    case ChainKind::hat: return "hat";
  }
  return "?";
}

double chain_constant(int n) { return -0.25 * std::pow(-4.0, n); }

PhiState::PhiState(ChainKind kind, int index) : kind_(kind), index_(index) {
  if (index < 0) throw UsageError("chain index must be non-negative");
  if (kind == ChainKind::tilde && index % 2 == 0) {
    throw UsageError("tilde solutions need an odd chain index (C_n > 0), got " +
                     std::to_string(index));
  }
  if (kind == ChainKind::hat && index % 2 != 0) {
    throw UsageError("hat solutions need an even chain index (C_n < 0), got " +
                     std::to_string(index));
  }
}

double PhiState::first_integral() const {
  const double c = chain_C();
  return kind_ == ChainKind::hat ? -c : c;
}

std::optional<PhiValue> PhiState::operator()(double y) const {
  auto v = plain_element(index_, y);
  if (!v || kind_ == ChainKind::plain) return v;
  if (std::abs(v->phi) < kZeroThreshold) return std::nullopt;
  const double s = std::sqrt(std::abs(chain_C()));
  return PhiValue{s / v->phi, -s * v->dphi / (v->phi * v->phi)};
}

PhiState phi_chain(int n) { return PhiState(ChainKind::plain, n); }

PoleInventory pole_inventory(int n, int scan_points) {
  const PhiState phi = phi_chain(n);
  PoleInventory inv;
  inv.index = n;
  inv.period = 4.0 * modulus().quarter_period();
  const double h = inv.period / scan_points;

  // Sign of phi flips across both its zeros and its (simple) poles; a flip
  // is a pole when 1/phi tends to zero there.
  const auto recip = [&](double y) -> std::optional<double> {
    auto v = phi(y);
    if (!v) return 0.0;
    return 1.0 / v->phi;
  };
  double prev_y = -0.5 * h;
  auto prev = recip(prev_y);
  for (int i = 0; i <= scan_points; ++i) {
    const double y = (i + 0.5) * h;
    auto cur = recip(y);
    if (prev && cur && (*prev) * (*cur) <= 0.0) {
      double a = prev_y;
      double b = y;
      double fa = *prev;
      for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = recip(mid).value_or(0.0);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      // A zero of phi shows up as a jump of 1/phi, not a crossing.
      const auto probe = phi(root);
      const bool is_pole = !probe || std::abs(probe->phi) > 1e6;
      if (is_pole) {
        double where = std::fmod(root, inv.period);
        if (where < 0.0) where += inv.period;
        if (inv.period - where < 1e-9) where = 0.0;
        inv.poles.push_back(where);
      }
    }
    prev_y = y;
    prev = cur;
  }
  std::sort(inv.poles.begin(), inv.poles.end());
  inv.poles.erase(std::unique(inv.poles.begin(), inv.poles.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                  inv.poles.end());
  return inv;
}

}  // namespace rdexact::chain
