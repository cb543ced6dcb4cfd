#pragma once

// Jacobi elliptic functions (real argument, real modulus 0 <= k <= 1) and the
// Weierstrass p-function for real invariants, evaluated on the real line.
//
// Jacobi functions use the descending Landen (AGM) transformation after
// reduction by the real period 4K. The circular (k = 0) and hyperbolic
// (k = 1) moduli are closed-form branches.
//
// The Weierstrass function is reduced by its real period and reflected into
// (0, omega]. Inside half the shortest lattice distance it is summed from its
// Laurent series; further out the argument is halved until it falls inside
// that disc and the duplication formula carries the value back.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace rdexact::elliptic {

// Quotients whose denominator magnitude falls below this are undefined.
inline constexpr double kPoleThreshold = 1e-8;

class Modulus {
 public:
  // Throws DomainError unless 0 <= k <= 1.
  explicit Modulus(double k);

  double k() const { return k_; }
  double k2() const { return k_ * k_; }
  // k' = sqrt(1 - k^2)
  double complementary() const { return kp_; }
  // Quarter period K(k); +infinity at k = 1.
  double quarter_period() const { return quarter_period_; }

 private:
  friend struct JacobiKernel;
  static constexpr int kMaxAgm = 16;

  double k_;
  double kp_;
  double quarter_period_;
  // Descending AGM sequence a_n, c_n for n = 0..agm_steps_.
  int agm_steps_ = 0;
  std::array<double, kMaxAgm + 1> agm_a_{};
  std::array<double, kMaxAgm + 1> agm_c_{};
};

struct JacobiTriple {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;

  // sn vanishes: every quotient with sn in the denominator is undefined.
  bool at_pole() const;
};

// K(k). Throws DomainError for k outside [0, 1) (k = 1 has an unbounded period).
double complete_elliptic_k(const Modulus& m);

JacobiTriple jacobi(double y, const Modulus& m);

enum class Quotient { sn, cn, dn, ns, nc, nd, sc, cs, sd, ds, cd, dc };

// Throws UsageError for names outside the twelve Glaisher quotients.
Quotient parse_quotient(std::string_view name);
std::string_view quotient_name(Quotient q);

// nullopt when the denominator is below kPoleThreshold.
std::optional<double> jacobi_quotient(Quotient q, double y, const Modulus& m);
std::optional<double> quotient_of(Quotient q, const JacobiTriple& j);

struct WeierstrassInvariants {
  double g2 = 0.0;
  double g3 = 0.0;

  double discriminant() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
};

struct WeierstrassValue {
  double p = 0.0;
  double dp = 0.0;
};

// p(z; g2, g3) on the real axis. Construction solves for the lattice once so
// that repeated evaluation is cheap.
class Weierstrass {
 public:
  // Throws DomainError for a degenerate lattice (zero discriminant) other
  // than g2 = g3 = 0, which is handled as p = 1/z^2.
  explicit Weierstrass(WeierstrassInvariants inv);

  // nullopt within kPoleThreshold of a real lattice point.
  std::optional<WeierstrassValue> operator()(double z) const;

  const WeierstrassInvariants& invariants() const { return inv_; }
  // Smallest positive real period 2*omega; 0 for the degenerate lattice.
  double real_period() const { return 2.0 * half_period_; }

  static constexpr int kLaurentTerms = 40;

  // Laurent coefficients c_2..c_40 of p(z) = z^-2 + sum c_j z^(2j-2).
  const std::array<double, kLaurentTerms + 1>& laurent() const { return laurent_; }

 private:
  WeierstrassValue seed(double z) const;

  WeierstrassInvariants inv_;
  bool degenerate_ = false;
  double half_period_ = 0.0;
  double seed_radius_ = 0.0;
  std::array<double, kLaurentTerms + 1> laurent_{};
};

std::optional<WeierstrassValue> weierstrass_p(double z, WeierstrassInvariants inv);

}  // namespace rdexact::elliptic
