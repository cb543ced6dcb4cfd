#include "rdexact/catalog.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "rdexact/elliptic.hpp"
#include "rdexact/error.hpp"

namespace rdexact {

namespace {

using std::numbers::sqrt2;
const double kSqrt6 = std::sqrt(6.0);

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }
bool is_odd_integer(double v) {
  return is_integer(v) && std::fmod(std::abs(std::round(v)), 2.0) == 1.0;
}

// base^p on the real line: any sign for odd-integer p (and for even-integer p
// when allow_even_negative), positive base otherwise.
std::optional<double> real_power(double base, double p, bool allow_even_negative) {
  if (is_integer(p)) {
    if (base == 0.0 && p < 0.0) return std::nullopt;
    if (base < 0.0 && !is_odd_integer(p) && !allow_even_negative) return std::nullopt;
    return std::pow(base, std::round(p));
  }
  if (base <= 0.0) return std::nullopt;
  return std::pow(base, p);
}

std::optional<double> finite(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

const elliptic::Modulus& chain_modulus() {
  static const elliptic::Modulus m(chain::kModulus);
  return m;
}

}  // namespace

Sampler shifted(const Sampler& s, double dx, double dt) {
  Sampler out = s;
  out.params["shift_x"] = s.params.value("shift_x", 0.0) + dx;
  out.params["shift_t"] = s.params.value("shift_t", 0.0) + dt;
  out.eval = [f = s.eval, dx, dt](double x, double t) { return f(x + dx, t + dt); };
  return out;
}

Sampler perturbed(const Sampler& s, double amplitude) {
  Sampler out = s;
  out.family_id = s.family_id + "+sin";
  out.params["perturbation"] = amplitude;
  out.eval = [f = s.eval, amplitude](double x, double t) -> std::optional<double> {
    auto v = f(x, t);
    if (!v) return std::nullopt;
    return *v + amplitude * std::sin(x);
  };
  return out;
}

Sampler constant_sampler(double value, EquationSpec eq) {
  Sampler s;
  s.family_id = "constant";
  s.params = {{"value", value}};
  s.equation = std::move(eq);
  s.domain_note = "everywhere";
  s.eval = [value](double, double) -> std::optional<double> { return value; };
  return s;
}

nlohmann::json describe_sampler(const Sampler& s) {
  return {{"family", s.family_id},
          {"params", s.params},
          {"equation", s.equation},
          {"domain", s.domain_note}};
}

namespace catalog {

namespace {

EquationSpec chain_equation(chain::ChainKind kind, double linear) {
  if (kind == chain::ChainKind::hat) {
    // n = -1 gives k = -1: f = -(l1 u + l4 u^3) = 2u^3 + 2 s u
    return GeneralFamily{-1.0, -linear, 0.0, 0.0, -2.0, 1.0};
  }
  if (linear == 0.0) return PowerLaw{3.0};
  return GeneralFamily{3.0, linear, 0.0, 0.0, 0.0, 1.0};
}

// Pole or vanishing value of a closed-form denominator.
std::optional<double> safe_div(double num, double den) {
  if (std::abs(den) < kSingularThreshold) return std::nullopt;
  return finite(num / den);
}

}  // namespace

Sampler elliptic_solution(chain::ChainKind kind, int index) {
  const chain::PhiState psi(kind, index);
  Sampler s;
  s.family_id = std::string("elliptic/") + chain::kind_name(kind);
  s.params = {{"index", index}};
  s.equation = chain_equation(kind, 0.0);
  s.domain_note = "undefined at poles of the chain element along y = x^2 + 6t";
  s.eval = [psi](double x, double t) -> std::optional<double> {
    const auto v = psi(x * x + 6.0 * t);
    if (!v) return std::nullopt;
    return finite(2.0 * x * v->phi);
  };
  return s;
}

const char* carrier_name(Carrier c) { return c == Carrier::cosh ? "cosh" : "cos"; }

Carrier parse_carrier(std::string_view name) {
  if (name == "cosh") return Carrier::cosh;
  if (name == "cos") return Carrier::cos;
  throw UsageError("unknown carrier '" + std::string(name) + "'; expected cosh or cos");
}

Sampler cosh_cos_solution(Carrier carrier, double k1, double k2, chain::ChainKind kind, int index) {
  if (k1 == 0.0 || !std::isfinite(k1)) throw UsageError("carrier amplitude k1 must be nonzero");
  const chain::PhiState psi(kind, index);
  const double s_lin = carrier == Carrier::cosh ? 1.0 : -1.0;
  Sampler s;
  s.family_id = std::string("cosh-cos/") + chain::kind_name(kind);
  s.params = {{"carrier", carrier_name(carrier)}, {"k1", k1}, {"k2", k2}, {"index", index}};
  s.equation = chain_equation(kind, 2.0 * s_lin);
  s.domain_note = "undefined at poles of the chain element along the carrier";
  s.eval = [psi, carrier, k1, k2](double x, double t) -> std::optional<double> {
    double w = 0.0;
    double wx = 0.0;
    if (carrier == Carrier::cosh) {
      const double e = k1 * std::exp(3.0 * t);
      w = e * std::cosh(x + k2);
      wx = e * std::sinh(x + k2);
    } else {
      const double e = k1 * std::exp(-3.0 * t);
      w = e * std::cos(x + k2);
      wx = -e * std::sin(x + k2);
    }
    const auto v = psi(w);
    if (!v) return std::nullopt;
    return finite(wx * v->phi);
  };
  return s;
}

Sampler plane_wave(double n, double c1, double c2, double lambda2) {
  const PlaneWaveEquation pw = build_plane_wave_equation(n, c1, lambda2);
  if (c1 == 0.0) throw DomainError("plane wave needs c1 != 0");
  const double k = pw.k;
  const double sign = pw.spec.ratio_sign;
  const double rate = (2.0 * k + 1.0) * c1 * c1 - lambda2 * c1;
  Sampler s;
  s.family_id = "plane-wave";
  s.params = {{"n", n}, {"c1", c1}, {"c2", c2}, {"lambda2", lambda2}};
  s.equation = pw.spec;
  s.domain_note = "masked where 1 + c2 e^(...) vanishes or the ratio c1/(1 + c2 e^(...)) has the "
                  "wrong sign for the power k";
  s.eval = [=](double x, double t) -> std::optional<double> {
    const double d = 1.0 + c2 * std::exp(-c1 * x - rate * t);
    if (std::abs(d) < kSingularThreshold) return std::nullopt;
    const double r = c1 / d;
    if (is_integer(k) && !is_odd_integer(k) && r * sign < 0.0) return std::nullopt;
    const auto u = real_power(r, k, true);
    if (!u) return std::nullopt;
    return finite(*u);
  };
  return s;
}

const char* branch_name(SolitaryBranch b) {
  switch (b) {
    case SolitaryBranch::tanh: return "tanh";
    case SolitaryBranch::tanh_inverse: return "tanh-inverse";
    case SolitaryBranch::tan: return "tan";
    case SolitaryBranch::rational: return "rational";
  }
  return "?";
}

SolitaryBranch parse_branch(std::string_view name) {
  for (auto b : {SolitaryBranch::tanh, SolitaryBranch::tanh_inverse, SolitaryBranch::tan,
                 SolitaryBranch::rational}) {
    if (name == branch_name(b)) return b;
  }
  throw UsageError("unknown solitary branch '" + std::string(name) +
                   "'; expected tanh, tanh-inverse, tan or rational");
}

Sampler solitary_wave(double n, double nu, double sigma, SolitaryBranch branch, double C) {
  const double k = derived_constants(n).k;
  switch (branch) {
    case SolitaryBranch::tanh:
    case SolitaryBranch::tanh_inverse:
      if (!(nu < 0.0)) throw UsageError("tanh branches need nu < 0");
      break;
    case SolitaryBranch::tan:
      if (!(nu > 0.0)) throw UsageError("tan branch needs nu > 0");
      break;
    case SolitaryBranch::rational:
      if (nu != 0.0) throw UsageError("rational branch needs nu = 0");
      break;
  }
  const double speed = sigma / sqrt2;
  const double b = (n - 1.0) * std::sqrt(std::abs(nu) / 2.0);
  const double inv = 1.0 / (n - 1.0);
  Sampler s;
  s.family_id = std::string("solitary/") + branch_name(branch);
  s.params = {{"n", n}, {"nu", nu}, {"sigma", sigma}, {"C", C}};
  s.equation = SigmaFamily{n, nu, sigma};
  s.domain_note = "masked where the tanh/tan/linear base is non-positive (unless 2/(n-1) is an odd "
                  "integer) or singular";
  s.eval = [=](double y, double tau) -> std::optional<double> {
    const double xi = y - speed * tau;
    double base = 0.0;
    double pref = 0.0;
    double p = k;
    switch (branch) {
      case SolitaryBranch::tanh:
      case SolitaryBranch::tanh_inverse:
        base = std::tanh(b * xi + C);
        pref = std::pow(-nu, inv);
        if (branch == SolitaryBranch::tanh_inverse) p = -k;
        break;
      case SolitaryBranch::tan: {
        const double theta = -b * xi + C;
        if (std::abs(std::cos(theta)) < kSingularThreshold) return std::nullopt;
        base = std::tan(theta);
        pref = std::pow(nu, inv);
        break;
      }
      case SolitaryBranch::rational:
        base = (n - 1.0) * (xi + C);
        pref = std::pow(2.0, inv);
        p = -k;
        break;
    }
    if (p < 0.0 && std::abs(base) < kSingularThreshold) return std::nullopt;
    const auto v = real_power(base, p, false);
    if (!v) return std::nullopt;
    return finite(pref * *v);
  };
  return s;
}

Sampler perturbed_fisher_bell(double epsilon, double C, BellForm form) {
  Sampler s;
  s.params = {{"epsilon", epsilon}, {"C", C}};
  s.equation = PerturbedFisher{epsilon, false};
  if (form == BellForm::half) {
    const double speed = epsilon * std::sqrt(1.5);
    s.family_id = "bell/half";
    s.domain_note = epsilon == 0.0 ? "everywhere"
                                   : "defined where -(x + eps sqrt(3/2) t)/2 + C > 0";
    s.eval = [=](double x, double t) -> std::optional<double> {
      const double arg = -0.5 * (x + speed * t) + C;
      if (epsilon != 0.0 && arg <= 0.0) return std::nullopt;
      const double ch = std::cosh(arg);
      return 1.5 / (ch * ch);
    };
  } else {
    const double speed = epsilon / kSqrt6;
    s.family_id = "bell/printed";
    s.domain_note = "everywhere (exact only for eps = 0)";
    s.eval = [=](double x, double t) -> std::optional<double> {
      const double ch = std::cosh(0.5 * (x - speed * t) + C);
      return 1.5 / (ch * ch);
    };
  }
  return s;
}

const char* fisher_variant_name(FisherVariant v) {
  switch (v) {
    case FisherVariant::ablowitz: return "ablowitz";
    case FisherVariant::u1: return "u1";
    case FisherVariant::u2: return "u2";
    case FisherVariant::u3: return "u3";
    case FisherVariant::u4: return "u4";
    case FisherVariant::weierstrass: return "weierstrass";
  }
  return "?";
}

FisherVariant parse_fisher_variant(std::string_view name) {
  for (auto v : {FisherVariant::ablowitz, FisherVariant::u1, FisherVariant::u2, FisherVariant::u3,
                 FisherVariant::u4, FisherVariant::weierstrass}) {
    if (name == fisher_variant_name(v)) return v;
  }
  throw UsageError("unknown Fisher variant '" + std::string(name) +
                   "'; expected ablowitz, u1, u2, u3, u4 or weierstrass");
}

Sampler fisher_family(FisherVariant variant, const FisherParams& p, bool reflect_y) {
  Sampler s;
  s.family_id = std::string("fisher/") + fisher_variant_name(variant);
  s.equation = Fisher{};
  s.params = {{"reflect", reflect_y}};
  const double ys = reflect_y ? -1.0 : 1.0;
  switch (variant) {
    case FisherVariant::ablowitz: {
      const double c2 = p.c2;
      s.params["c2"] = c2;
      s.domain_note = "masked where 1 + c2 e^(y/sqrt 6 - 5 tau/6) vanishes";
      s.eval = [=](double y, double tau) -> std::optional<double> {
        const double d = 1.0 + c2 * std::exp(ys * y / kSqrt6 - 5.0 * tau / 6.0);
        if (std::abs(d) < kSingularThreshold) return std::nullopt;
        return finite(1.0 / (d * d));
      };
      break;
    }
    case FisherVariant::u1:
    case FisherVariant::u2:
    case FisherVariant::u3:
    case FisherVariant::u4: {
      const double c = p.c;
      s.params["c"] = c;
      const bool coth = variant == FisherVariant::u2 || variant == FisherVariant::u4;
      const bool flip = variant == FisherVariant::u3 || variant == FisherVariant::u4;
      // v = 1 - u solves v_tau - v_yy = v(v - 1), not the Fisher equation.
      if (flip) s.equation = polynomial_reaction({0.0, -1.0, 1.0});
      s.domain_note = coth ? "masked on the line y/(2 sqrt 6) - 5 tau/12 = c" : "everywhere";
      s.eval = [=](double y, double tau) -> std::optional<double> {
        const double arg = ys * y / (2.0 * kSqrt6) - 5.0 * tau / 12.0 - c;
        double th = std::tanh(arg);
        if (coth) {
          if (std::abs(th) < kSingularThreshold) return std::nullopt;
          th = 1.0 / th;
        }
        const double u = 0.25 * (1.0 - th) * (1.0 - th);
        return finite(flip ? 1.0 - u : u);
      };
      break;
    }
    case FisherVariant::weierstrass: {
      if (p.C == 0.0) throw DomainError("Weierstrass Fisher solution needs C != 0");
      s.params["C"] = p.C;
      s.params["k"] = p.k_shift;
      s.params["amplitude"] = p.amplitude;
      s.domain_note = "masked at real poles of p(z; 0, C), z = exp(-y/sqrt 6 + 5 tau/6 + k)";
      auto wp = std::make_shared<const elliptic::Weierstrass>(elliptic::WeierstrassInvariants{0.0, p.C});
      const double a = p.amplitude;
      const double k = p.k_shift;
      s.eval = [=](double y, double tau) -> std::optional<double> {
        const double z = std::exp(-ys * y / kSqrt6 + 5.0 * tau / 6.0 + k);
        if (!std::isfinite(z)) return std::nullopt;
        const auto v = (*wp)(z);
        if (!v) return std::nullopt;
        return finite(a * z * z * v->p);
      };
      break;
    }
  }
  return s;
}

Sampler generalized_fisher(double c1, GfVariant variant, double c, bool reflect_y) {
  if (!std::isfinite(c1) || c1 == 0.0) throw DomainError("generalized Fisher needs c1 != 0");
  const double sign = c1 < 0.0 ? -1.0 : 1.0;
  const double ys = reflect_y ? -1.0 : 1.0;
  const bool coth = variant == GfVariant::coth;
  const bool has_root = c1 != -1.0;
  Sampler s;
  s.family_id = coth ? "generalized-fisher/coth" : "generalized-fisher/tanh";
  s.params = {{"c1", c1}, {"c", c}, {"reflect", reflect_y}};
  s.equation = GeneralizedFisher{c1, sign};
  s.domain_note = coth ? "masked on the singular line and where 1 + coth(...) < 0 (c1 != -1)"
                       : "everywhere";
  s.eval = [=](double y, double tau) -> std::optional<double> {
    const double arg = c1 * ys * y / (2.0 * kSqrt6) + c1 * (2.0 * c1 - 3.0) * tau / 12.0 - c;
    double th = std::tanh(arg);
    if (coth) {
      if (std::abs(th) < kSingularThreshold) return std::nullopt;
      th = 1.0 / th;
      if (has_root && 1.0 + th < 0.0) return std::nullopt;
    }
    const double r = 0.5 * c1 * (1.0 + th);
    return finite(r * r);
  };
  return s;
}

Sampler quadratic_rational(int sign, bool printed) {
  if (sign != 1 && sign != -1) throw UsageError("rational solution sign must be +1 or -1");
  const double r6 = sign * kSqrt6;
  Sampler s;
  s.family_id = printed ? "quadratic-rational/printed" : "quadratic-rational";
  s.params = {{"sign", sign}};
  s.equation = QuadraticDecay{};
  s.domain_note = "masked where x^2 + 10(3 +- sqrt 6) t vanishes";
  s.eval = [=](double x, double t) -> std::optional<double> {
    const double d = x * x + 10.0 * (3.0 + r6) * t;
    if (std::abs(d) < kSingularThreshold) return std::nullopt;
    if (printed) {
      return finite(((3.0 + r6) * x * x + 10.0 * (12.0 + 5.0 * r6) * t) / (3.0 * d * d));
    }
    return finite(12.0 * ((4.0 + r6) * x * x + 10.0 * (12.0 + 5.0 * r6) * t) / (d * d));
  };
  return s;
}

Sampler potential_transform(const Potential& z, double k, EquationSpec eq, double ratio_sign) {
  Sampler s;
  s.family_id = "potential/" + z.label;
  s.params = {{"k", k}, {"ratio_sign", ratio_sign}};
  s.equation = std::move(eq);
  s.domain_note = "masked where z vanishes or z_x/z has the wrong sign for the power k";
  s.eval = [f = z.eval, k, ratio_sign](double x, double t) -> std::optional<double> {
    const auto j = f(x, t);
    if (!j || std::abs(j->z) < kSingularThreshold) return std::nullopt;
    const double r = j->zx / j->z;
    if (is_integer(k) && !is_odd_integer(k) && r * ratio_sign < 0.0) return std::nullopt;
    const auto u = real_power(r, k, true);
    if (!u) return std::nullopt;
    return finite(*u);
  };
  return s;
}

Potential plane_wave_potential(double n, double c1, double c2, double lambda2) {
  const double k = derived_constants(n).k;
  return {"plane-wave", [=](double x, double t) -> std::optional<PotentialJet> {
            const double e1 = std::exp(c1 * x + k * c1 * c1 * t);
            const double e2 = std::exp((lambda2 * c1 - (k + 1.0) * c1 * c1) * t);
            const PotentialJet j{e1 + c2 * e2, c1 * e1};
            if (!std::isfinite(j.z) || !std::isfinite(j.zx)) return std::nullopt;
            return j;
          }};
}

Potential chain_potential(int index) {
  const chain::PhiState phi = chain::phi_chain(index);
  return {"chain", [phi](double x, double t) -> std::optional<PotentialJet> {
            const auto v = phi(x * x + 6.0 * t);
            if (!v) return std::nullopt;
            return PotentialJet{v->phi, 2.0 * x * v->dphi};
          }};
}

Potential fisher_potential(double k_shift) {
  return {"fisher-exp", [k_shift](double y, double tau) -> std::optional<PotentialJet> {
            const double z = std::exp(-y / kSqrt6 + 5.0 * tau / 6.0 + k_shift);
            if (!std::isfinite(z)) return std::nullopt;
            return PotentialJet{z, -z / kSqrt6};
          }};
}

namespace closed_form {

namespace {

struct Quotients {
  double sn, cn, dn;
};

std::optional<Quotients> at(double x, double t) {
  const auto j = elliptic::jacobi(x * x + 6.0 * t, chain_modulus());
  if (std::abs(j.sn) < kSingularThreshold || std::abs(j.cn) < kSingularThreshold) {
    return std::nullopt;
  }
  return Quotients{j.sn, j.cn, j.dn};
}

}  // namespace

std::optional<double> u2(double x, double t) {
  const auto q = at(x, t);
  if (!q) return std::nullopt;
  const double cd = q->cn / q->dn;
  const double dc = q->dn / q->cn;
  const double ds = q->dn / q->sn;
  return finite(2.0 * x * ((cd - dc) / q->sn - q->cn * ds));
}

std::optional<double> u3(double x, double t, double coefficient) {
  const auto q = at(x, t);
  if (!q) return std::nullopt;
  const double cs = q->cn / q->sn;
  const double ds = q->dn / q->sn;
  const double num = 2.0 * x * (std::pow(cs, 4) - std::pow(q->dn, 4));
  return safe_div(num, q->dn * cs * (coefficient * q->cn * q->cn - ds * ds));
}

std::optional<double> tilde_u1(double x, double t) {
  const auto q = at(x, t);
  if (!q) return std::nullopt;
  return safe_div(2.0 * x * q->dn, q->cn / q->sn);
}

std::optional<double> tilde_u3(double x, double t, double coefficient) {
  const auto q = at(x, t);
  if (!q) return std::nullopt;
  const double cs = q->cn / q->sn;
  const double ds = q->dn / q->sn;
  const double num = 4.0 * x * q->dn * cs * (coefficient * q->cn * q->cn - ds * ds);
  return safe_div(num, std::pow(cs, 4) - std::pow(q->dn, 4));
}

std::optional<double> hat_u0(double x, double t) {
  const auto q = at(x, t);
  if (!q) return std::nullopt;
  return finite(x * q->sn / q->dn);
}

std::optional<double> hat_u2(double x, double t) {
  const auto q = at(x, t);
  if (!q) return std::nullopt;
  const double cd = q->cn / q->dn;
  const double dc = q->dn / q->cn;
  return safe_div(4.0 * x * q->sn, cd - dc - q->cn * q->dn * q->sn);
}

}  // namespace closed_form

}  // namespace catalog
}  // namespace rdexact
