#pragma once

// The chain phi_0 = ds(y, 1/sqrt 2), phi_{n+1} = phi_n' / phi_n of solutions
// of phi'' = 2 phi^3, together with the reciprocal transforms
//   tilde: sqrt(C_n) / phi_n  (odd n, C_n > 0), solves phi'' =  2 phi^3
//   hat:   sqrt(B_n) / phi_n  (even n, B_n = -C_n > 0), solves phi'' = -2 phi^3
//
// Derivatives travel analytically through the first integral
// (phi')^2 = phi^4 + C_n, so phi_{n+1}' = (phi_n^4 - C_n) / phi_n^2.

#include <optional>
#include <vector>

namespace rdexact::chain {

inline constexpr double kModulus = 0.70710678118654752440;

// Below this magnitude a chain element is treated as vanishing: the next
// element (and any reciprocal transform) is at a pole.
inline constexpr double kZeroThreshold = 1e-8;

struct PhiValue {
  double phi = 0.0;
  double dphi = 0.0;
};

enum class ChainKind { plain, tilde, hat };

const char* kind_name(ChainKind kind);

// (-4)^n * (-1/4)
double chain_constant(int n);

class PhiState {
 public:
  // Throws UsageError for a negative index or a parity mismatch (tilde needs
  // odd n, hat needs even n).
  PhiState(ChainKind kind, int index);

  ChainKind kind() const { return kind_; }
  int index() const { return index_; }
  // C_n of the underlying chain element.
  double chain_C() const { return chain_constant(index_); }
  // c in psi'' = c psi^3: +2 for plain and tilde, -2 for hat.
  int c_sign() const { return kind_ == ChainKind::hat ? -2 : 2; }
  // K in (psi')^2 = (c/2) psi^4 + K.
  double first_integral() const;

  // nullopt at a pole of this element or of any intermediate element.
  std::optional<PhiValue> operator()(double y) const;

 private:
  ChainKind kind_;
  int index_;
};

PhiState phi_chain(int n);

struct PoleInventory {
  int index = 0;
  double period = 0.0;  // 4K
  std::vector<double> poles;  // in [0, period)
};

// Poles of phi_n over one period [0, 4K) of the seed, located to ~1e-12.
PoleInventory pole_inventory(int n, int scan_points = 8000);

}  // namespace rdexact::chain
