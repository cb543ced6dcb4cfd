#include "rdexact/registry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdexact/elliptic.hpp"
#include "rdexact/error.hpp"

namespace rdexact::registry {

namespace {

using nlohmann::json;
using verify::Grid2D;

const double kSqrt6 = std::sqrt(6.0);

// Every chain element up to depth 4 is pole-free for y = x^2 + 6t in
// [1.19, 1.59]; the nearest poles sit at K/2 and K.
constexpr double kChainCentre = 1.39;

int as_int(const json& p, const char* key) {
  const double v = p.at(key).get<double>();
  if (v != std::round(v)) throw UsageError(std::string("parameter ") + key + " must be an integer");
  return static_cast<int>(v);
}

double as_double(const json& p, const char* key) { return p.at(key).get<double>(); }

bool as_bool(const json& p, const char* key) {
  const json& v = p.at(key);
  if (v.is_boolean()) return v.get<bool>();
  return v.get<double>() != 0.0;
}

simulate::SimConfig sim_config(double x_min, double x_max, double h, double t0, double t1,
                               int checkpoints) {
  simulate::SimConfig c;
  c.x_min = x_min;
  c.x_max = x_max;
  c.n_x = static_cast<int>(std::lround((x_max - x_min) / h)) + 1;
  c.t0 = t0;
  c.t1 = t1;
  for (int i = 0; i <= checkpoints; ++i) c.checkpoints.push_back(t0 + (t1 - t0) * i / checkpoints);
  return c;
}

// Simulation over the verification window, coarsened to at most 401 points.
SimPlan default_plan(const Grid2D& g, const Sampler& s) {
  SimPlan plan;
  const double h = std::max((g.x_max - g.x_min) / 400.0, g.hx());
  plan.config = sim_config(g.x_min, g.x_max, h, g.t_min, g.t_max, 4);
  plan.equation = s.equation;
  return plan;
}

std::function<SimPlan(const json&, const Sampler&)> plan_from_grid(
    std::function<Grid2D(const json&)> grid) {
  return [grid](const json& p, const Sampler& s) { return default_plan(grid(p), s); };
}

// Points per axis: enough for the truncation error to fall below 1e-6 while
// staying well above the rounding floor, so the observed order is meaningful.
int chain_points(chain::ChainKind kind, int index) {
  switch (kind) {
    case chain::ChainKind::plain:
      return index <= 1 ? 81 : 601;
    case chain::ChainKind::tilde:
      return index == 1 ? 601 : 241;
    case chain::ChainKind::hat:
      return index == 0 ? 81 : index == 2 ? 121 : 241;
  }
  return 241;
}

int carrier_points(chain::ChainKind kind, int index) {
  if (index <= 1) return 81;
  if (kind == chain::ChainKind::hat) return index == 2 ? 81 : 121;
  return index == 3 ? 121 : 241;
}

std::function<Grid2D(const json&)> chain_grid(chain::ChainKind kind) {
  return [kind](const json& p) {
    const int n = chain_points(kind, as_int(p, "index"));
    return Grid2D{-0.3, 0.3, n, (kChainCentre - 0.2) / 6.0, (kChainCentre + 0.2 - 0.09) / 6.0, n};
  };
}

std::function<Grid2D(const json&)> carrier_grid(chain::ChainKind kind) {
  return [kind](const json& p) {
    const int n = carrier_points(kind, as_int(p, "index"));
    return Grid2D{-0.2, 0.2, n, -0.03, 0.03, n};
  };
}

FamilyInfo elliptic_family(chain::ChainKind kind) {
  FamilyInfo f;
  f.id = std::string("elliptic/") + (kind == chain::ChainKind::plain ? "u" : chain::kind_name(kind));
  switch (kind) {
    case chain::ChainKind::plain:
      f.formula = "u = 2x phi_n(x^2 + 6t), phi_0 = ds(., 1/sqrt 2), phi_{n+1} = phi_n'/phi_n";
      f.defaults = {{"index", 0}};
      break;
    case chain::ChainKind::tilde:
      f.formula = "u = 2x sqrt(C_n)/phi_n(x^2 + 6t), n odd";
      f.defaults = {{"index", 1}};
      break;
    case chain::ChainKind::hat:
      f.formula = "u = x sqrt(B_n)/phi_n(x^2 + 6t), B_n = -C_n, n even";
      f.defaults = {{"index", 0}};
      break;
  }
  f.build = [kind](const json& p) { return catalog::elliptic_solution(kind, as_int(p, "index")); };
  f.verify_grid = chain_grid(kind);
  f.sim_plan = plan_from_grid(f.verify_grid);
  return f;
}

FamilyInfo carrier_family(chain::ChainKind kind) {
  FamilyInfo f;
  f.id = std::string("cosh-cos/") + (kind == chain::ChainKind::plain ? "u" : chain::kind_name(kind));
  f.formula = "u = w_x psi(w), w = k1 cosh(x + k2) e^(3t) or k1 cos(x + k2) e^(-3t)";
  f.defaults = {{"carrier", "cosh"},
                {"k1", kChainCentre},
                {"k2", 0.0},
                {"index", kind == chain::ChainKind::tilde ? 1 : 0}};
  f.build = [kind](const json& p) {
    return catalog::cosh_cos_solution(catalog::parse_carrier(p.at("carrier").get<std::string>()),
                                      as_double(p, "k1"), as_double(p, "k2"), kind,
                                      as_int(p, "index"));
  };
  f.verify_grid = carrier_grid(kind);
  f.sim_plan = plan_from_grid(f.verify_grid);
  return f;
}

FamilyInfo plane_wave_family() {
  FamilyInfo f;
  f.id = "plane-wave";
  f.formula = "u = c1^k / (1 + c2 exp(-c1 x - ((2k+1) c1^2 - lambda2 c1) t))^k, k = 2/(n-1)";
  f.defaults = {{"n", 2.0}, {"c1", -1.0}, {"c2", 1.0}, {"lambda2", 0.0}};
  f.build = [](const json& p) {
    return catalog::plane_wave(as_double(p, "n"), as_double(p, "c1"), as_double(p, "c2"),
                               as_double(p, "lambda2"));
  };
  f.verify_grid = [](const json&) { return Grid2D{-3.0, 3.0, 481, 0.0, 0.5, 241}; };
  f.sim_plan = [](const json& p, const Sampler& s) {
    const double n = as_double(p, "n");
    const double c1 = as_double(p, "c1");
    const auto pw = build_plane_wave_equation(n, c1, as_double(p, "lambda2"));
    SimPlan plan;
    plan.config = sim_config(-12.0, 12.0, 0.05, -1.0, 1.0, 8);
    plan.equation = s.equation;
    plan.method = VelocityMethod::level;
    plan.level = 0.5 * std::pow(c1, pw.k);
    // The front sits where c1 x + ((2k+1)c1^2 - lambda2 c1) t is constant.
    plan.predicted_velocity =
        -((2.0 * pw.k + 1.0) * c1 * c1 - as_double(p, "lambda2") * c1) / c1;
    return plan;
  };
  return f;
}

// Window in xi = y - sigma tau / sqrt 2 keeping the tanh argument in
// [0.8, 2.8], the tan argument in [0.2, 1.2] and the linear base in [1, 3].
Grid2D solitary_grid(catalog::SolitaryBranch branch, const json& p) {
  const double n = as_double(p, "n");
  const double nu = as_double(p, "nu");
  const double C = as_double(p, "C");
  const double speed = as_double(p, "sigma") / std::sqrt(2.0);
  const double b = (n - 1.0) * std::sqrt(std::abs(nu) / 2.0);
  double lo = 0.0;
  double hi = 0.0;
  switch (branch) {
    case catalog::SolitaryBranch::tanh:
    case catalog::SolitaryBranch::tanh_inverse:
      lo = (0.8 - C) / b;
      hi = (2.8 - C) / b;
      break;
    case catalog::SolitaryBranch::tan:
      lo = (C - 1.2) / b;
      hi = (C - 0.2) / b;
      break;
    case catalog::SolitaryBranch::rational:
      lo = (1.0 / (n - 1.0)) - C;
      hi = (3.0 / (n - 1.0)) - C;
      break;
  }
  const double T = std::min(1.0, 0.5 * (hi - lo) / std::max(std::abs(speed), 1e-12));
  if (speed >= 0.0) {
    lo += speed * T;
  } else {
    hi += speed * T;
  }
  int points = 161;
  if (branch == catalog::SolitaryBranch::tanh_inverse) points = 321;
  if (branch == catalog::SolitaryBranch::tan) points = 401;
  return {lo, hi, points, 0.0, T, points};
}

FamilyInfo solitary_family(catalog::SolitaryBranch branch) {
  FamilyInfo f;
  f.id = std::string("solitary/") + catalog::branch_name(branch);
  f.formula = "travelling waves of the sigma family in (y, tau), speed sigma/sqrt 2";
  switch (branch) {
    case catalog::SolitaryBranch::tanh:
    case catalog::SolitaryBranch::tanh_inverse:
      f.defaults = {{"n", 2.0}, {"nu", -1.5}, {"sigma", 0.9}, {"C", 2.0}};
      break;
    case catalog::SolitaryBranch::tan:
      f.defaults = {{"n", 2.0}, {"nu", 1.5}, {"sigma", 0.9}, {"C", 0.5}};
      break;
    case catalog::SolitaryBranch::rational:
      f.defaults = {{"n", 2.0}, {"nu", 0.0}, {"sigma", 0.9}, {"C", 5.0}};
      break;
  }
  f.verify_grid = [branch](const json& p) { return solitary_grid(branch, p); };
  f.build = [branch](const json& p) {
    return catalog::solitary_wave(as_double(p, "n"), as_double(p, "nu"), as_double(p, "sigma"),
                                  branch, as_double(p, "C"));
  };
  f.sim_plan = plan_from_grid(f.verify_grid);
  return f;
}

FamilyInfo bell_family(catalog::BellForm form) {
  FamilyInfo f;
  const bool half = form == catalog::BellForm::half;
  f.id = half ? "bell/half" : "bell/printed";
  f.formula = half ? "u = 3 / (2 cosh^2(-(x + eps sqrt(3/2) t)/2 + C)), one side of the crest"
                   : "u = 3 / (2 cosh^2((x - eps t/sqrt 6)/2 + C))";
  f.defaults = {{"epsilon", 0.3}, {"C", 0.0}};
  f.build = [form](const json& p) {
    return catalog::perturbed_fisher_bell(as_double(p, "epsilon"), as_double(p, "C"), form);
  };
  if (half) {
    f.verify_grid = [](const json& p) {
      const double c = as_double(p, "C");
      return Grid2D{2.0 * c - 12.0, 2.0 * c - 2.0, 321, 0.0, 1.0, 161};
    };
    f.sim_plan = plan_from_grid(f.verify_grid);
  } else {
    f.verify_grid = [](const json&) { return Grid2D{-10.0, 10.0, 321, 0.0, 1.0, 161}; };
    f.sim_plan = [](const json& p, const Sampler& s) {
      SimPlan plan;
      plan.config = sim_config(-30.0, 30.0, 0.05, 0.0, 2.0, 8);
      plan.equation = s.equation;
      plan.method = VelocityMethod::registration;
      plan.max_shift = 2.0;
      plan.predicted_velocity = as_double(p, "epsilon") / kSqrt6;
      return plan;
    };
  }
  return f;
}

// Front solutions of the Fisher equation move at 5/sqrt 6 in the direction of
// increasing y (decreasing y when reflected).
SimPlan fisher_front_plan(const json& p, const Sampler& s) {
  SimPlan plan;
  plan.config = sim_config(-20.0, 20.0, 0.05, 0.0, 2.0, 8);
  plan.equation = s.equation;
  plan.method = VelocityMethod::level;
  plan.level = 0.5;
  plan.predicted_velocity = (as_bool(p, "reflect") ? -5.0 : 5.0) / kSqrt6;
  return plan;
}

Grid2D fisher_coth_grid(const json& p) {
  const double ys = as_bool(p, "reflect") ? -1.0 : 1.0;
  // Keep the coth argument above 0.8 for tau in [0, 2].
  const double lo = 2.0 * kSqrt6 * (as_double(p, "c") + 0.8 + 5.0 / 6.0);
  const double a = ys > 0 ? lo : -lo - 12.0;
  return {a, a + 12.0, 321, 0.0, 2.0, 161};
}

Grid2D weierstrass_grid(const json& p) {
  const double C = as_double(p, "C");
  const double k = as_double(p, "k");
  const double period = elliptic::Weierstrass({0.0, C}).real_period();
  // z between 0.25 and 0.65 of the distance to the first real pole.
  const double tau1 = 0.3;
  const double y_min = kSqrt6 * (k + 5.0 * tau1 / 6.0 - std::log(0.65 * period));
  const double y_max = kSqrt6 * (k - std::log(0.25 * period));
  return {y_min, y_max, 641, 0.0, tau1, 321};
}

std::vector<FamilyInfo> fisher_families() {
  std::vector<FamilyInfo> out;
  for (auto v : {catalog::FisherVariant::ablowitz, catalog::FisherVariant::u1,
                 catalog::FisherVariant::u2, catalog::FisherVariant::u3,
                 catalog::FisherVariant::u4, catalog::FisherVariant::weierstrass}) {
    FamilyInfo f;
    f.id = std::string("fisher/") + catalog::fisher_variant_name(v);
    switch (v) {
      case catalog::FisherVariant::ablowitz:
        f.formula = "u = 1 / (1 + c2 exp(y/sqrt 6 - 5 tau/6))^2";
        f.defaults = {{"c2", 1.0}, {"reflect", false}};
        break;
      case catalog::FisherVariant::u1:
        f.formula = "u = (1 - tanh(y/(2 sqrt 6) - 5 tau/12 - c))^2 / 4";
        f.defaults = {{"c", 0.0}, {"reflect", false}};
        break;
      case catalog::FisherVariant::u2:
        f.formula = "u = (1 - coth(y/(2 sqrt 6) - 5 tau/12 - c))^2 / 4";
        f.defaults = {{"c", 0.0}, {"reflect", false}};
        break;
      case catalog::FisherVariant::u3:
        f.formula = "u = 1 - u1, solving u_tau - u_yy = -u(1 - u)";
        f.defaults = {{"c", 0.0}, {"reflect", false}};
        break;
      case catalog::FisherVariant::u4:
        f.formula = "u = 1 - u2, solving u_tau - u_yy = -u(1 - u)";
        f.defaults = {{"c", 0.0}, {"reflect", false}};
        break;
      case catalog::FisherVariant::weierstrass:
        f.formula = "u = A z^2 p(z; 0, C), z = exp(-y/sqrt 6 + 5 tau/6 + k)";
        f.defaults = {{"C", 100.0}, {"k", 0.0}, {"amplitude", 1.0}, {"reflect", false}};
        break;
    }
    f.build = [v](const json& p) {
      catalog::FisherParams fp;
      if (p.contains("c2")) fp.c2 = as_double(p, "c2");
      if (p.contains("c")) fp.c = as_double(p, "c");
      if (p.contains("C")) fp.C = as_double(p, "C");
      if (p.contains("k")) fp.k_shift = as_double(p, "k");
      if (p.contains("amplitude")) fp.amplitude = as_double(p, "amplitude");
      return catalog::fisher_family(v, fp, as_bool(p, "reflect"));
    };
    switch (v) {
      case catalog::FisherVariant::ablowitz:
      case catalog::FisherVariant::u1:
      case catalog::FisherVariant::u3:
        f.verify_grid = [](const json&) { return Grid2D{-20.0, 20.0, 401, 0.0, 5.0, 201}; };
        f.sim_plan = fisher_front_plan;
        break;
      case catalog::FisherVariant::u2:
      case catalog::FisherVariant::u4:
        f.verify_grid = fisher_coth_grid;
        f.sim_plan = plan_from_grid(fisher_coth_grid);
        break;
      case catalog::FisherVariant::weierstrass:
        f.verify_grid = weierstrass_grid;
        f.sim_plan = plan_from_grid(weierstrass_grid);
        break;
    }
    out.push_back(std::move(f));
  }
  return out;
}

// Front of ((c1/2)(1 + tanh(a)))^2 with a = ys c1 y/(2 sqrt 6) + c1(2c1 - 3) tau/12 - c.
double gf_velocity(double c1, bool reflect) {
  return (reflect ? 1.0 : -1.0) * (2.0 * c1 - 3.0) / kSqrt6;
}

Grid2D gf_coth_grid(const json& p) {
  const double c1 = as_double(p, "c1");
  const double ys = as_bool(p, "reflect") ? -1.0 : 1.0;
  const double drift = std::abs(c1 * (2.0 * c1 - 3.0)) / 12.0;
  const double lo = 2.0 * kSqrt6 * (1.0 + drift + std::abs(as_double(p, "c"))) / std::abs(c1);
  const double side = ys * (c1 < 0.0 ? -1.0 : 1.0);
  const double a = side > 0 ? lo : -lo - 12.0;
  return {a, a + 12.0, 481, 0.0, 1.0, 241};
}

std::vector<FamilyInfo> gf_families() {
  std::vector<FamilyInfo> out;
  for (auto v : {catalog::GfVariant::tanh, catalog::GfVariant::coth}) {
    FamilyInfo f;
    const bool coth = v == catalog::GfVariant::coth;
    f.id = coth ? "generalized-fisher/coth" : "generalized-fisher/tanh";
    f.formula = coth ? "u = (c1/2)^2 (1 + coth(c1 y/(2 sqrt 6) + c1(2c1 - 3) tau/12 - c))^2"
                     : "u = (c1/2)^2 (1 + tanh(c1 y/(2 sqrt 6) + c1(2c1 - 3) tau/12 - c))^2";
    f.defaults = {{"c1", 2.0}, {"c", 0.0}, {"reflect", false}};
    f.build = [v](const json& p) {
      return catalog::generalized_fisher(as_double(p, "c1"), v, as_double(p, "c"),
                                         as_bool(p, "reflect"));
    };
    if (coth) {
      f.verify_grid = gf_coth_grid;
      f.sim_plan = plan_from_grid(gf_coth_grid);
    } else {
      f.verify_grid = [](const json&) { return Grid2D{-10.0, 10.0, 481, 0.0, 2.0, 241}; };
      f.sim_plan = [](const json& p, const Sampler& s) {
        const double c1 = as_double(p, "c1");
        SimPlan plan;
        plan.config = sim_config(-20.0, 20.0, 0.05, 0.0, 2.0, 8);
        plan.equation = s.equation;
        plan.method = VelocityMethod::level;
        plan.level = c1 * c1 / 2.0;
        plan.predicted_velocity = gf_velocity(c1, as_bool(p, "reflect"));
        return plan;
      };
    }
    out.push_back(std::move(f));
  }
  return out;
}

FamilyInfo rational_family(bool printed) {
  FamilyInfo f;
  f.id = printed ? "quadratic-rational/printed" : "quadratic-rational";
  f.formula = printed
                  ? "u = ((3 +- sqrt 6) x^2 + 10(12 +- 5 sqrt 6) t) / (3 (x^2 + 10(3 +- sqrt 6) t)^2)"
                  : "u = 12((4 +- sqrt 6) x^2 + 10(12 +- 5 sqrt 6) t) / (x^2 + 10(3 +- sqrt 6) t)^2";
  f.defaults = {{"sign", 1}};
  f.build = [printed](const json& p) {
    return catalog::quadratic_rational(as_int(p, "sign"), printed);
  };
  f.verify_grid = [](const json&) { return Grid2D{-2.0, 2.0, 321, 0.5, 1.5, 161}; };
  f.sim_plan = plan_from_grid(f.verify_grid);
  return f;
}

std::vector<FamilyInfo> build_all() {
  std::vector<FamilyInfo> all;
  for (auto k : {chain::ChainKind::plain, chain::ChainKind::tilde, chain::ChainKind::hat}) {
    all.push_back(elliptic_family(k));
  }
  for (auto k : {chain::ChainKind::plain, chain::ChainKind::tilde, chain::ChainKind::hat}) {
    all.push_back(carrier_family(k));
  }
  all.push_back(plane_wave_family());
  for (auto b : {catalog::SolitaryBranch::tanh, catalog::SolitaryBranch::tanh_inverse,
                 catalog::SolitaryBranch::tan, catalog::SolitaryBranch::rational}) {
    all.push_back(solitary_family(b));
  }
  all.push_back(bell_family(catalog::BellForm::half));
  all.push_back(bell_family(catalog::BellForm::printed));
  for (auto& f : fisher_families()) all.push_back(std::move(f));
  for (auto& f : gf_families()) all.push_back(std::move(f));
  all.push_back(rational_family(false));
  all.push_back(rational_family(true));
  return all;
}

}  // namespace

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> all = build_all();
  return all;
}

const FamilyInfo& find_family(std::string_view id) {
  const auto& all = families();
  auto it = std::find_if(all.begin(), all.end(), [&](const FamilyInfo& f) { return f.id == id; });
  if (it != all.end()) return *it;
  std::string names;
  for (const auto& f : all) names += (names.empty() ? "" : ", ") + f.id;
  throw UsageError("unknown family '" + std::string(id) + "'; valid families: " + names);
}

json resolve_params(const FamilyInfo& f, const json& params) {
  json out = f.defaults;
  if (params.is_null()) return out;
  if (!params.is_object()) throw UsageError("parameters must be a JSON object");
  for (const auto& [key, value] : params.items()) {
    if (!f.defaults.contains(key)) {
      std::string names;
      for (const auto& [k, v] : f.defaults.items()) names += (names.empty() ? "" : ", ") + k;
      throw UsageError("unknown parameter '" + key + "' for " + f.id + "; valid parameters: " +
                       names);
    }
    if (f.defaults.at(key).is_string() != value.is_string()) {
      throw UsageError("parameter '" + key + "' for " + f.id + " has the wrong type");
    }
    out[key] = value;
  }
  return out;
}

Sampler make_sampler(std::string_view id, const json& params) {
  const FamilyInfo& f = find_family(id);
  return f.build(resolve_params(f, params));
}

}  // namespace rdexact::registry
