#pragma once

// Reaction terms f(u) for equations of the form u_t - u_xx = f(u).

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rdexact {

struct Fisher {};

// Arbitrary scalar reaction term. The label is used for display and
// serialization; a KppGeneric built from JSON carries polynomial coefficients.
struct KppGeneric {
  std::function<double(double)> f;
  std::string label;
  std::vector<double> poly;  // ascending coefficients when built from a polynomial
};

// alpha (u^3 + b u^2 + c u), alpha = +-1
struct CubicPolynomial {
  double alpha = 1.0;
  double b = 0.0;
  double c = 0.0;
};

// -lambda u^n with lambda = 2(n+1)/(n-1)^2
struct PowerLaw {
  double n = 3.0;
};

// k(-(k+1)u^n + l1 u + l2 u^((n+1)/2) + l3 u^((3-n)/2) + l4 u^(2-n)), k = 2/(n-1).
//
// Every term is u * r^j with r = u^(1/k) and j in {2, 0, 1, -1, -2}. When k
// is an even integer the potential ratio r may be negative, in which case
// ratio_sign = -1 picks the branch r = -|u|^(1/k) for the odd-j terms.
struct GeneralFamily {
  double n = 3.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double ratio_sign = 1.0;
};

// (1 + nu u^(1-n)) (-(n+1) u^n + nu (n-3) u + sigma u^((n+1)/2))
struct SigmaFamily {
  double n = 2.0;
  double nu = 0.0;
  double sigma = 0.0;
};

// u (u - 1 + eps sqrt(3/2 - u)), the image of the n = 2 sigma family under
// u -> 3/2 - u with nu = -3/2. With as_printed set, the Fisher part carries
// the opposite sign: u (1 - u + eps sqrt(3/2 - u)).
struct PerturbedFisher {
  double epsilon = 0.0;
  bool as_printed = false;
};

// u (-c1 + (c1 + 1) s sqrt(u) - u) with s = ratio_sign.
struct GeneralizedFisher {
  double c1 = -1.0;
  double ratio_sign = 1.0;
};

// -u^2
struct QuadraticDecay {};

using EquationSpec = std::variant<Fisher, KppGeneric, CubicPolynomial, PowerLaw, GeneralFamily,
                                  SigmaFamily, PerturbedFisher, GeneralizedFisher, QuadraticDecay>;

// KppGeneric with f(u) = sum coeffs[i] u^i.
KppGeneric polynomial_reaction(std::vector<double> coeffs);

// Throws DomainError for parameters outside a variant's admissible set.
void validate(const EquationSpec& spec);

// Throws DomainError when u lies outside the variant's natural domain, e.g. a
// fractional power of a negative base; the message names the offending term.
double rhs_eval(const EquationSpec& spec, double u);

// Same as rhs_eval but returns nullopt instead of throwing a DomainError.
std::optional<double> try_rhs(const EquationSpec& spec, double u);

std::string variant_name(const EquationSpec& spec);
// Human-readable equation, e.g. "u_t - u_xx = u(1 - u)".
std::string describe(const EquationSpec& spec);

struct DerivedConstants {
  double k = 0.0;
  double lambda = 0.0;
};

// k = 2/(n-1), lambda = 2(n+1)/(n-1)^2. Throws DomainError for n = 1.
DerivedConstants derived_constants(double n);

struct KppReport {
  double f0 = 0.0;
  double f1 = 0.0;
  bool f0_zero = false;
  bool f1_zero = false;
  double fprime0 = 0.0;
  bool fprime0_positive = false;
  bool interior_bound_ok = false;
  bool passes() const { return f0_zero && f1_zero && fprime0_positive && interior_bound_ok; }
};

KppReport kpp_check(const EquationSpec& spec);

struct PlaneWaveEquation {
  GeneralFamily spec;
  double k = 0.0;
  // lambda2 = (k+1)(c1+1)
  bool kpp_condition = false;
  // k + 1 - k c1, present only under the condition above.
  std::optional<double> velocity;
};

// Three-term equation admitting the plane wave c1^k / (1 + c2 e^(...))^k:
// -k(k+1)u^n + lambda2 k u^((n+1)/2) + ((k+1)c1^2 - lambda2 c1) k u.
PlaneWaveEquation build_plane_wave_equation(double n, double c1, double lambda2);

void to_json(nlohmann::json& j, const EquationSpec& spec);
// KppGeneric is read from {"variant": "kpp_generic", "poly": [a0, a1, ...]}.
EquationSpec equation_from_json(const nlohmann::json& j);

}  // namespace rdexact
