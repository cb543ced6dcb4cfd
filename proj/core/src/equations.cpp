#include "rdexact/equations.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "numfmt.hpp"
#include "rdexact/error.hpp"

namespace rdexact {

namespace {

using detail::num;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

bool is_odd_integer(double v) {
  return is_integer(v) && std::fmod(std::abs(std::round(v)), 2.0) == 1.0;
}

bool is_even_integer(double v) {
  return is_integer(v) && std::fmod(std::abs(std::round(v)), 2.0) == 0.0;
}

std::string power_label(double p) { return "u^(" + num(p) + ")"; }

// u * r^j with r = u^(1/k) on the branch selected by ratio_sign.
double ratio_term(double u, double k, int j, double ratio_sign) {
  const double p = 1.0 + j / k;
  if (is_integer(p)) {
    const double ip = std::round(p);
    if (u == 0.0 && ip < 0.0) throw DomainError("term " + power_label(p) + " is singular at u = 0");
    return std::pow(u, ip);
  }
  if (is_odd_integer(k)) {
    // Real odd root keeps every sign of u.
    if (u == 0.0) {
      if (p < 0.0) throw DomainError("term " + power_label(p) + " is singular at u = 0");
      return 0.0;
    }
    const double r = std::copysign(std::pow(std::abs(u), 1.0 / k), u);
    return u * std::pow(r, j);
  }
  if (u < 0.0) {
    throw DomainError("term " + power_label(p) + " needs u >= 0, got u = " + num(u));
  }
  if (u == 0.0) {
    if (p < 0.0) throw DomainError("term " + power_label(p) + " is singular at u = 0");
    return 0.0;
  }
  const double sign = (j % 2 != 0) ? ratio_sign : 1.0;
  return sign * std::pow(u, p);
}

double power(double u, double p) {
  if (is_integer(p)) {
    if (u == 0.0 && p < 0.0) throw DomainError("term " + power_label(p) + " is singular at u = 0");
    return std::pow(u, std::round(p));
  }
  if (u < 0.0) throw DomainError("term " + power_label(p) + " needs u >= 0, got u = " + num(u));
  if (u == 0.0 && p < 0.0) throw DomainError("term " + power_label(p) + " is singular at u = 0");
  return std::pow(u, p);
}

void require_n(double n) {
  if (!std::isfinite(n) || n == 1.0) throw DomainError("exponent n must be finite and differ from 1");
}

void require_sign(double s, const char* what) {
  if (s != 1.0 && s != -1.0) throw DomainError(std::string(what) + " must be +1 or -1");
}

double eval_general(const GeneralFamily& g, double u) {
  const double k = 2.0 / (g.n - 1.0);
  double sum = -(k + 1.0) * ratio_term(u, k, 2, g.ratio_sign);
  sum += g.lambda1 * u;
  if (g.lambda2 != 0.0) sum += g.lambda2 * ratio_term(u, k, 1, g.ratio_sign);
  if (g.lambda3 != 0.0) sum += g.lambda3 * ratio_term(u, k, -1, g.ratio_sign);
  if (g.lambda4 != 0.0) sum += g.lambda4 * ratio_term(u, k, -2, g.ratio_sign);
  return k * sum;
}

double eval_sigma(const SigmaFamily& s, double u) {
  const double k = 2.0 / (s.n - 1.0);
  double sum = -(s.n + 1.0) * ratio_term(u, k, 2, 1.0);
  sum += -4.0 * s.nu * u;
  if (s.sigma != 0.0) sum += s.sigma * ratio_term(u, k, 1, 1.0);
  if (s.nu != 0.0) {
    sum += s.nu * s.nu * (s.n - 3.0) * ratio_term(u, k, -2, 1.0);
    if (s.sigma != 0.0) sum += s.sigma * s.nu * ratio_term(u, k, -1, 1.0);
  }
  return sum;
}

constexpr double kBranchSlack = 1e-8;

double eval_perturbed(const PerturbedFisher& p, double u) {
  const double fisher = p.as_printed ? 1.0 - u : u - 1.0;
  if (p.epsilon == 0.0) return u * fisher;
  // The crest of the bell touches u = 3/2; rounding overshoot there is
  // treated as the branch point itself.
  const double room = 1.5 - u;
  if (room < -kBranchSlack) {
    throw DomainError("term sqrt(3/2 - u) needs u <= 3/2, got u = " + num(u));
  }
  return u * (fisher + p.epsilon * std::sqrt(std::max(room, 0.0)));
}

double eval_generalized(const GeneralizedFisher& g, double u) {
  double root = 0.0;
  if (g.c1 + 1.0 != 0.0) {
    if (u < 0.0) throw DomainError("term u^(1/2) needs u >= 0, got u = " + num(u));
    root = g.ratio_sign * std::sqrt(u);
  }
  return u * (-g.c1 + (g.c1 + 1.0) * root - u);
}

std::string poly_label(const std::vector<double>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    if (!s.empty()) s += " + ";
    s += num(c[i]);
    if (i == 1) s += " u";
    if (i > 1) s += " u^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

KppGeneric polynomial_reaction(std::vector<double> coeffs) {
  KppGeneric g;
  g.label = poly_label(coeffs);
  g.poly = coeffs;
  g.f = [coeffs = std::move(coeffs)](double u) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
    return acc;
  };
  return g;
}

void validate(const EquationSpec& spec) {
  std::visit(overloaded{
                 [](const Fisher&) {},
                 [](const QuadraticDecay&) {},
                 [](const KppGeneric& g) {
                   if (!g.f) throw DomainError("kpp_generic needs a reaction function");
                 },
                 [](const CubicPolynomial& c) { require_sign(c.alpha, "cubic alpha"); },
                 [](const PowerLaw& p) { require_n(p.n); },
                 [](const GeneralFamily& g) {
                   require_n(g.n);
                   require_sign(g.ratio_sign, "ratio_sign");
                   const double k = 2.0 / (g.n - 1.0);
                   if (g.ratio_sign < 0.0 && !is_even_integer(k)) {
                     throw DomainError("ratio_sign = -1 needs k = 2/(n-1) to be an even integer");
                   }
                 },
                 [](const SigmaFamily& s) { require_n(s.n); },
                 [](const PerturbedFisher& p) {
                   if (!std::isfinite(p.epsilon)) throw DomainError("epsilon must be finite");
                 },
                 [](const GeneralizedFisher& g) {
                   if (!std::isfinite(g.c1)) throw DomainError("c1 must be finite");
                   require_sign(g.ratio_sign, "ratio_sign");
                 },
             },
             spec);
}

double rhs_eval(const EquationSpec& spec, double u) {
  return std::visit(
      overloaded{
          [u](const Fisher&) { return u * (1.0 - u); },
          [u](const KppGeneric& g) { return g.f(u); },
          [u](const CubicPolynomial& c) { return c.alpha * u * (u * u + c.b * u + c.c); },
          [u](const PowerLaw& p) { return -derived_constants(p.n).lambda * power(u, p.n); },
          [u](const GeneralFamily& g) { return eval_general(g, u); },
          [u](const SigmaFamily& s) { return eval_sigma(s, u); },
          [u](const PerturbedFisher& p) { return eval_perturbed(p, u); },
          [u](const GeneralizedFisher& g) { return eval_generalized(g, u); },
          [u](const QuadraticDecay&) { return -u * u; },
      },
      spec);
}

std::optional<double> try_rhs(const EquationSpec& spec, double u) {
  try {
    return rhs_eval(spec, u);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::string variant_name(const EquationSpec& spec) {
  return std::visit(overloaded{
                        [](const Fisher&) { return "fisher"; },
                        [](const KppGeneric&) { return "kpp_generic"; },
                        [](const CubicPolynomial&) { return "cubic"; },
                        [](const PowerLaw&) { return "power_law"; },
                        [](const GeneralFamily&) { return "general"; },
                        [](const SigmaFamily&) { return "sigma"; },
                        [](const PerturbedFisher&) { return "perturbed_fisher"; },
                        [](const GeneralizedFisher&) { return "generalized_fisher"; },
                        [](const QuadraticDecay&) { return "quadratic_decay"; },
                    },
                    spec);
}

std::string describe(const EquationSpec& spec) {
  const std::string lhs = "u_t - u_xx = ";
  return lhs +
         std::visit(
             overloaded{
                 [](const Fisher&) -> std::string { return "u(1 - u)"; },
                 [](const KppGeneric& g) -> std::string {
                   return g.label.empty() ? std::string("f(u)") : g.label;
                 },
                 [](const CubicPolynomial& c) -> std::string {
                   return num(c.alpha) + "(u^3 + " + num(c.b) + " u^2 + " + num(c.c) + " u)";
                 },
                 [](const PowerLaw& p) -> std::string {
                   return "-" + num(derived_constants(p.n).lambda) + " u^" + num(p.n);
                 },
                 [](const GeneralFamily& g) -> std::string {
                   const double k = 2.0 / (g.n - 1.0);
                   std::string s = num(k) + "(-" + num(k + 1.0) + " u^" + num(g.n);
                   if (g.lambda1 != 0.0) s += " + " + num(g.lambda1) + " u";
                   if (g.lambda2 != 0.0) s += " + " + num(g.lambda2) + " u^" + num((g.n + 1.0) / 2.0);
                   if (g.lambda3 != 0.0) s += " + " + num(g.lambda3) + " u^" + num((3.0 - g.n) / 2.0);
                   if (g.lambda4 != 0.0) s += " + " + num(g.lambda4) + " u^" + num(2.0 - g.n);
                   s += ")";
                   if (g.ratio_sign < 0.0) s += " [odd powers of u^(1/k) taken negative]";
                   return s;
                 },
                 [](const SigmaFamily& s) -> std::string {
                   return "(1 + " + num(s.nu) + " u^" + num(1.0 - s.n) + ")(-" + num(s.n + 1.0) +
                          " u^" + num(s.n) + " + " + num(s.nu * (s.n - 3.0)) + " u + " +
                          num(s.sigma) + " u^" + num((s.n + 1.0) / 2.0) + ")";
                 },
                 [](const PerturbedFisher& p) -> std::string {
                   return std::string(p.as_printed ? "u(1 - u + " : "u(u - 1 + ") + num(p.epsilon) +
                          " sqrt(3/2 - u))";
                 },
                 [](const GeneralizedFisher& g) -> std::string {
                   return "u(" + num(-g.c1) + " + " + num((g.c1 + 1.0) * g.ratio_sign) +
                          " sqrt(u) - u)";
                 },
                 [](const QuadraticDecay&) -> std::string { return "-u^2"; },
             },
             spec);
}

DerivedConstants derived_constants(double n) {
  require_n(n);
  const double d = n - 1.0;
  return {2.0 / d, 2.0 * (n + 1.0) / (d * d)};
}

KppReport kpp_check(const EquationSpec& spec) {
  KppReport r;
  const auto f = [&](double u) { return try_rhs(spec, u); };
  r.f0 = f(0.0).value_or(NAN);
  r.f1 = f(1.0).value_or(NAN);
  r.f0_zero = std::abs(r.f0) <= 1e-12;
  r.f1_zero = std::abs(r.f1) <= 1e-12;

  const double h = 1e-6;
  const auto fm = f(-h);
  const auto fp = f(h);
  const auto fp2 = f(2.0 * h);
  if (fm && fp) {
    r.fprime0 = (*fp - *fm) / (2.0 * h);
  } else if (fp && fp2 && std::isfinite(r.f0)) {
    r.fprime0 = (-3.0 * r.f0 + 4.0 * *fp - *fp2) / (2.0 * h);
  } else {
    r.fprime0 = NAN;
  }
  r.fprime0_positive = r.fprime0 > 0.0;

  r.interior_bound_ok = r.fprime0_positive;
  const int samples = 200;
  for (int i = 1; i < samples && r.interior_bound_ok; ++i) {
    const double u = static_cast<double>(i) / samples;
    const auto a = f(u + h);
    const auto b = f(u - h);
    if (!a || !b) {
      r.interior_bound_ok = false;
      break;
    }
    const double d = (*a - *b) / (2.0 * h);
    // Allow for difference error when f'(u) touches f'(0).
    if (!(d < r.fprime0 + 1e-7)) r.interior_bound_ok = false;
  }
  return r;
}

PlaneWaveEquation build_plane_wave_equation(double n, double c1, double lambda2) {
  require_n(n);
  const double k = 2.0 / (n - 1.0);
  PlaneWaveEquation out;
  out.k = k;
  out.spec.n = n;
  out.spec.lambda1 = (k + 1.0) * c1 * c1 - lambda2 * c1;
  out.spec.lambda2 = lambda2;
  out.spec.ratio_sign = (c1 < 0.0 && is_even_integer(k)) ? -1.0 : 1.0;
  const double target = (k + 1.0) * (c1 + 1.0);
  out.kpp_condition = std::abs(lambda2 - target) <= 1e-12 * std::max(1.0, std::abs(target));
  if (out.kpp_condition) out.velocity = k + 1.0 - k * c1;
  return out;
}

void to_json(nlohmann::json& j, const EquationSpec& spec) {
  j = nlohmann::json{{"variant", variant_name(spec)}};
  std::visit(overloaded{
                 [](const Fisher&) {},
                 [](const QuadraticDecay&) {},
                 [&j](const KppGeneric& g) {
                   j["label"] = g.label;
                   if (!g.poly.empty()) j["poly"] = g.poly;
                 },
                 [&j](const CubicPolynomial& c) {
                   j["alpha"] = c.alpha;
                   j["b"] = c.b;
                   j["c"] = c.c;
                 },
                 [&j](const PowerLaw& p) { j["n"] = p.n; },
                 [&j](const GeneralFamily& g) {
                   j["n"] = g.n;
                   j["lambda1"] = g.lambda1;
                   j["lambda2"] = g.lambda2;
                   j["lambda3"] = g.lambda3;
                   j["lambda4"] = g.lambda4;
                   j["ratio_sign"] = g.ratio_sign;
                 },
                 [&j](const SigmaFamily& s) {
                   j["n"] = s.n;
                   j["nu"] = s.nu;
                   j["sigma"] = s.sigma;
                 },
                 [&j](const PerturbedFisher& p) {
                   j["epsilon"] = p.epsilon;
                   j["as_printed"] = p.as_printed;
                 },
                 [&j](const GeneralizedFisher& g) {
                   j["c1"] = g.c1;
                   j["ratio_sign"] = g.ratio_sign;
                 },
             },
             spec);
  j["equation"] = describe(spec);
}

EquationSpec equation_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant")) {
    throw UsageError("equation JSON needs an object with a \"variant\" field");
  }
  const std::string v = j.at("variant").get<std::string>();
  const auto get = [&j](const char* key, double def) { return j.value(key, def); };
  EquationSpec spec;
  if (v == "fisher") {
    spec = Fisher{};
  } else if (v == "quadratic_decay") {
    spec = QuadraticDecay{};
  } else if (v == "kpp_generic") {
    if (!j.contains("poly")) throw UsageError("kpp_generic from JSON needs \"poly\" coefficients");
    spec = polynomial_reaction(j.at("poly").get<std::vector<double>>());
  } else if (v == "cubic") {
    spec = CubicPolynomial{get("alpha", 1.0), get("b", 0.0), get("c", 0.0)};
  } else if (v == "power_law") {
    spec = PowerLaw{get("n", 3.0)};
  } else if (v == "general") {
    spec = GeneralFamily{get("n", 3.0),      get("lambda1", 0.0), get("lambda2", 0.0),
                         get("lambda3", 0.0), get("lambda4", 0.0), get("ratio_sign", 1.0)};
  } else if (v == "sigma") {
    spec = SigmaFamily{get("n", 2.0), get("nu", 0.0), get("sigma", 0.0)};
  } else if (v == "perturbed_fisher") {
    spec = PerturbedFisher{get("epsilon", 0.0), j.value("as_printed", false)};
  } else if (v == "generalized_fisher") {
    spec = GeneralizedFisher{get("c1", -1.0), get("ratio_sign", 1.0)};
  } else {
    throw UsageError("unknown equation variant '" + v +
                     "'; expected one of fisher kpp_generic cubic power_law general sigma "
                     "perturbed_fisher generalized_fisher quadratic_decay");
  }
  validate(spec);
  return spec;
}

}  // namespace rdexact
