#pragma once

// Exact solutions as samplers (x, t) -> value, undefined at masked points.
//
// Families written in rescaled variables (y, tau) are sampled with x playing
// the role of y and t the role of tau; the attached equation is the one in
// those variables.

#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rdexact/chain.hpp"
#include "rdexact/equations.hpp"

namespace rdexact {

using SampleFn = std::function<std::optional<double>(double x, double t)>;

struct Sampler {
  std::string family_id;
  nlohmann::json params = nlohmann::json::object();
  EquationSpec equation;
  std::string domain_note;
  SampleFn eval;

  std::optional<double> operator()(double x, double t) const { return eval(x, t); }
};

// Sampler evaluated at (x + dx, t + dt).
Sampler shifted(const Sampler& s, double dx, double dt);
// u(x, t) + amplitude * sin(x), keeping the original equation.
Sampler perturbed(const Sampler& s, double amplitude);
Sampler constant_sampler(double value, EquationSpec eq);

// Metadata without the callable, for reports.
nlohmann::json describe_sampler(const Sampler& s);

// A potential z(x, t) with its first space derivative.
struct PotentialJet {
  double z = 0.0;
  double zx = 0.0;
};
using PotentialFn = std::function<std::optional<PotentialJet>(double x, double t)>;

struct Potential {
  std::string label;
  PotentialFn eval;
  std::optional<PotentialJet> operator()(double x, double t) const { return eval(x, t); }
};

namespace catalog {

// Denominators below this magnitude mask the sample.
inline constexpr double kSingularThreshold = 1e-8;

// u = 2x psi(x^2 + 6t) for psi the chain element of the given kind.
Sampler elliptic_solution(chain::ChainKind kind, int index);

enum class Carrier { cosh, cos };
const char* carrier_name(Carrier c);
Carrier parse_carrier(std::string_view name);

// u = w_x psi(w) with w = k1 cosh(x + k2) e^(3t) or w = k1 cos(x + k2) e^(-3t).
// plain/tilde kinds solve u_t - u_xx = -2u^3 + 2 s u and hat kinds solve
// u_t - u_xx = 2u^3 + 2 s u, with s = +1 for cosh and s = -1 for cos.
Sampler cosh_cos_solution(Carrier carrier, double k1, double k2, chain::ChainKind kind, int index);

// u = c1^k / (1 + c2 exp(-c1 x - ((2k+1)c1^2 - lambda2 c1) t))^k, k = 2/(n-1).
Sampler plane_wave(double n, double c1, double c2, double lambda2);

enum class SolitaryBranch { tanh, tanh_inverse, tan, rational };
const char* branch_name(SolitaryBranch b);
SolitaryBranch parse_branch(std::string_view name);

// Solutions of the sigma family in (y, tau), travelling at sigma/sqrt 2.
Sampler solitary_wave(double n, double nu, double sigma, SolitaryBranch branch, double C);

// Bell-shaped wave for u_t - u_xx = u(u - 1 + eps sqrt(3/2 - u)).
//   half:    3 / (2 cosh^2(-(x + eps sqrt(3/2) t)/2 + C)), defined where the
//            cosh argument is positive (the image of the tanh branch).
//   printed: 3 / (2 cosh^2((x - eps t / sqrt 6)/2 + C)) over the whole line.
enum class BellForm { half, printed };
Sampler perturbed_fisher_bell(double epsilon, double C, BellForm form);

enum class FisherVariant { ablowitz, u1, u2, u3, u4, weierstrass };
const char* fisher_variant_name(FisherVariant v);
FisherVariant parse_fisher_variant(std::string_view name);

struct FisherParams {
  double c2 = 1.0;        // ablowitz
  double c = 0.0;         // u1..u4 front offset
  double C = 100.0;       // weierstrass g3
  double k_shift = 0.0;   // weierstrass exponent shift
  double amplitude = 1.0; // weierstrass prefactor A in u = A z^2 p(z; 0, C)
};

// Solutions of u_tau - u_yy = u(1 - u).
Sampler fisher_family(FisherVariant variant, const FisherParams& p, bool reflect_y);

enum class GfVariant { tanh, coth };

// (c1^2/4)(1 + tanh(c1 y/(2 sqrt 6) + c1(2c1 - 3) tau/12 - c))^2 and the coth
// companion, for u_tau - u_yy = u(-c1 + (c1 + 1) s sqrt(u) - u), s = sign(c1).
Sampler generalized_fisher(double c1, GfVariant variant, double c, bool reflect_y);

// 12((4 +- sqrt 6) x^2 + 10(12 +- 5 sqrt 6) t) / (x^2 + 10(3 +- sqrt 6) t)^2
// for u_t - u_xx = -u^2. With printed set, the variant
// ((3 +- sqrt 6) x^2 + 10(12 +- 5 sqrt 6) t) / (3 (x^2 + 10(3 +- sqrt 6) t)^2).
Sampler quadratic_rational(int sign, bool printed = false);

// u = (z_x / z)^k. For non-integer k the ratio must be positive; for even k a
// negative ratio is allowed when it matches ratio_sign.
Sampler potential_transform(const Potential& z, double k, EquationSpec eq,
                            double ratio_sign = 1.0);

// z = exp(c1 x + k c1^2 t) + c2 exp((lambda2 c1 - (k+1) c1^2) t)
Potential plane_wave_potential(double n, double c1, double c2, double lambda2);
// z = phi_n(x^2 + 6t)
Potential chain_potential(int index);
// z = exp(-y/sqrt 6 + 5 tau/6 + k)
Potential fisher_potential(double k_shift = 0.0);

// Closed forms in Jacobi quotients of y = x^2 + 6t (modulus 1/sqrt 2), to be
// compared with the chain-generated solutions.
namespace closed_form {
std::optional<double> u2(double x, double t);
// The cn^2 coefficient in the u3 and tilde u3 denominators is a parameter so
// that alternatives can be checked.
inline constexpr double kU3Coefficient = 3.1819805153394638598;  // (9/4) sqrt 2
std::optional<double> u3(double x, double t, double coefficient = kU3Coefficient);
std::optional<double> tilde_u1(double x, double t);
std::optional<double> tilde_u3(double x, double t, double coefficient = kU3Coefficient);
std::optional<double> hat_u0(double x, double t);
std::optional<double> hat_u2(double x, double t);
}  // namespace closed_form

}  // namespace catalog
}  // namespace rdexact
