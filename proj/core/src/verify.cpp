#include "rdexact/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "rdexact/elliptic.hpp"
#include "rdexact/error.hpp"

namespace rdexact::verify {

void Grid2D::validate() const {
  if (n_x < 8 || n_t < 8) throw UsageError("grid needs at least 8 points in x and in t");
  if (!(x_max > x_min) || !(t_max > t_min)) throw UsageError("grid ranges must be non-empty");
}

namespace {

constexpr int kLevels = 3;
constexpr int kSpacings[kLevels] = {4, 2, 1};
constexpr int kStandoff = 5;
constexpr std::size_t kMaxOffenders = 10;

// Samples of a scalar field on the grid padded by (px, pt) nodes per side.
struct PaddedField {
  int nx, nt, px, pt;
  double x0, t0, hx, ht;
  std::vector<double> v;
  std::vector<char> ok;

  int wx() const { return nx + 2 * px; }
  int wt() const { return nt + 2 * pt; }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j + pt) * wx() + static_cast<std::size_t>(i + px);
  }
  double operator()(int i, int j) const { return v[idx(i, j)]; }
  bool defined(int i, int j) const { return ok[idx(i, j)] != 0; }
  double x(int i) const { return x0 + i * hx; }
  double t(int j) const { return t0 + j * ht; }
};

template <class F>
PaddedField sample_field(const F& f, const Grid2D& g, int px, int pt) {
  PaddedField fld{g.n_x, g.n_t, px, pt, g.x_min, g.t_min, g.hx(), g.ht(), {}, {}};
  const std::size_t size = static_cast<std::size_t>(fld.wx()) * fld.wt();
  fld.v.assign(size, 0.0);
  fld.ok.assign(size, 0);
  for (int j = -pt; j < g.n_t + pt; ++j) {
    for (int i = -px; i < g.n_x + px; ++i) {
      const auto val = f(fld.x(i), fld.t(j));
      if (val && std::isfinite(*val)) {
        fld.v[fld.idx(i, j)] = *val;
        fld.ok[fld.idx(i, j)] = 1;
      }
    }
  }
  return fld;
}

// blocked(i, j) is true when an undefined sample lies within (rx, rt) nodes.
std::vector<char> dilate(const PaddedField& f, int rx, int rt) {
  const int wx = f.wx();
  const int wt = f.wt();
  // Row pass then column pass over prefix sums of undefined counts.
  std::vector<int> row(static_cast<std::size_t>(wx) * wt, 0);
  std::vector<int> prefix(static_cast<std::size_t>(std::max(wx, wt)) + 1, 0);
  for (int j = 0; j < wt; ++j) {
    for (int i = 0; i < wx; ++i) prefix[i + 1] = prefix[i] + (f.ok[j * wx + i] ? 0 : 1);
    for (int i = 0; i < wx; ++i) {
      const int lo = std::max(0, i - rx);
      const int hi = std::min(wx, i + rx + 1);
      row[j * wx + i] = prefix[hi] - prefix[lo] > 0 ? 1 : 0;
    }
  }
  std::vector<char> out(static_cast<std::size_t>(wx) * wt, 0);
  for (int i = 0; i < wx; ++i) {
    for (int j = 0; j < wt; ++j) prefix[j + 1] = prefix[j] + row[j * wx + i];
    for (int j = 0; j < wt; ++j) {
      const int lo = std::max(0, j - rt);
      const int hi = std::min(wt, j + rt + 1);
      out[j * wx + i] = prefix[hi] - prefix[lo] > 0 ? 1 : 0;
    }
  }
  return out;
}

// Accessor handed to residual kernels: offsets in units of the level spacing.
struct Stencil {
  const PaddedField* f;
  int i, j, s;
  double operator()(int di, int dj) const { return (*f)(i + di * s, j + dj * s); }
};

template <class Kernel>
ResidualReport run_levels(const PaddedField& fld, int rx, int rt, const Kernel& kernel,
                          const std::string& note) {
  const int total = fld.nx * fld.nt;
  std::vector<std::vector<char>> blocked;
  for (int s : kSpacings) blocked.push_back(dilate(fld, kStandoff * rx * s, kStandoff * rt * s));

  ResidualReport rep;
  rep.mask_note = note;
  std::vector<double> common(kLevels, 0.0);
  std::vector<Offender> worst;

  for (int lev = 0; lev < kLevels; ++lev) {
    const int s = kSpacings[lev];
    const double hx = fld.hx * s;
    const double ht = fld.ht * s;
    LevelStats st;
    st.spacing = s;
    double sumsq = 0.0;
    int used = 0;
    for (int j = 0; j < fld.nt; ++j) {
      for (int i = 0; i < fld.nx; ++i) {
        if (blocked[lev][fld.idx(i, j)]) continue;
        const auto r = kernel(Stencil{&fld, i, j, s}, hx, ht);
        if (!r || !std::isfinite(*r)) continue;
        const double a = std::abs(*r);
        ++used;
        sumsq += a * a;
        st.max_abs = std::max(st.max_abs, a);
        // Common points: usable at the coarsest level as well.
        if (!blocked[0][fld.idx(i, j)]) st.common_max = std::max(st.common_max, a);
        if (lev == kLevels - 1) {
          worst.push_back({fld.x(i), fld.t(j), *r});
          if (worst.size() > 4 * kMaxOffenders) {
            std::partial_sort(worst.begin(), worst.begin() + kMaxOffenders, worst.end(),
                              [](const Offender& a1, const Offender& b1) {
                                return std::abs(a1.value) > std::abs(b1.value);
                              });
            worst.resize(kMaxOffenders);
          }
        }
      }
    }
    st.defined_fraction = static_cast<double>(used) / total;
    st.l2 = used > 0 ? std::sqrt(sumsq / used) : 0.0;
    common[lev] = st.common_max;
    rep.levels.push_back(st);
  }

  const LevelStats& fine = rep.levels.back();
  rep.max_abs = fine.max_abs;
  rep.l2 = fine.l2;
  rep.defined_fraction = fine.defined_fraction;
  std::sort(worst.begin(), worst.end(), [](const Offender& a, const Offender& b) {
    return std::abs(a.value) > std::abs(b.value);
  });
  if (worst.size() > kMaxOffenders) worst.resize(kMaxOffenders);
  rep.worst = std::move(worst);

  if (rep.defined_fraction < 0.1) {
    throw VerificationImpossible("only " + std::to_string(rep.defined_fraction * 100.0) +
                                 "% of residual stencils avoid masked samples (" + note + ")");
  }
  const bool all_defined = std::all_of(rep.levels.begin(), rep.levels.end(),
                                       [](const LevelStats& l) { return l.defined_fraction > 0.5; });
  if (all_defined && common[2] > 0.0 && common[1] > 0.0) {
    rep.order_estimate = std::log2(common[1] / common[2]);
    if (common[0] > 0.0) rep.order_coarse = std::log2(common[0] / common[1]);
  }
  return rep;
}

double d1(double m2, double m1, double p1, double p2, double h) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

double d2(double m2, double m1, double c, double p1, double p2, double h) {
  return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
}

}  // namespace

ResidualReport pde_residual(const Sampler& s, const EquationSpec& eq, const Grid2D& g,
                            int stencil_order) {
  g.validate();
  if (stencil_order != 2 && stencil_order != 4) throw UsageError("stencil order must be 2 or 4");
  const int reach = stencil_order / 2;
  const PaddedField fld = sample_field(s.eval, g, reach * 4, reach * 4);
  const auto kernel = [&](const Stencil& u, double hx, double ht) -> std::optional<double> {
    const auto f = try_rhs(eq, u(0, 0));
    if (!f) return std::nullopt;
    double ut = 0.0;
    double uxx = 0.0;
    if (stencil_order == 4) {
      ut = d1(u(0, -2), u(0, -1), u(0, 1), u(0, 2), ht);
      uxx = d2(u(-2, 0), u(-1, 0), u(0, 0), u(1, 0), u(2, 0), hx);
    } else {
      ut = (u(0, 1) - u(0, -1)) / (2.0 * ht);
      uxx = (u(1, 0) - 2.0 * u(0, 0) + u(-1, 0)) / (hx * hx);
    }
    return ut - uxx - *f;
  };
  return run_levels(fld, reach, reach, kernel, s.domain_note);
}

ResidualReport potential_residual(const Potential& z, const PotentialParams& p, const Grid2D& g) {
  g.validate();
  const auto value = [&z](double x, double t) -> std::optional<double> {
    const auto j = z(x, t);
    if (!j) return std::nullopt;
    return j->z;
  };
  const PaddedField fld = sample_field(value, g, 3 * 4, 2 * 4);
  const auto kernel = [&](const Stencil& u, double hx, double ht) -> std::optional<double> {
    const auto dx_at = [&](int dj) { return d1(u(-2, dj), u(-1, dj), u(1, dj), u(2, dj), hx); };
    const double zv = u(0, 0);
    const double zx = dx_at(0);
    const double zxx = d2(u(-2, 0), u(-1, 0), zv, u(1, 0), u(2, 0), hx);
    const double zxxx =
        (-u(3, 0) + 8.0 * u(2, 0) - 13.0 * u(1, 0) + 13.0 * u(-1, 0) - 8.0 * u(-2, 0) + u(-3, 0)) /
        (8.0 * hx * hx * hx);
    const double zt = d1(u(0, -2), u(0, -1), u(0, 1), u(0, 2), ht);
    const double ztx = d1(dx_at(-2), dx_at(-1), dx_at(1), dx_at(2), ht);
    const double lhs = zv * (zx * ztx - zx * zxxx - p.lambda3 * zv * zx - p.lambda4 * zv * zv -
                             (p.k - 1.0) * zxx * zxx);
    const double rhs = zx * zx * (zt + p.lambda1 * zv + p.lambda2 * zx - (2.0 * p.k + 1.0) * zxx);
    return lhs - rhs;
  };
  return run_levels(fld, 3, 2, kernel, "masked where the potential is undefined");
}

ReducedSystem fisher_reduced_system(double y, double tau, double k_shift) {
  const double r6 = std::sqrt(6.0);
  const double z = std::exp(-y / r6 + 5.0 * tau / 6.0 + k_shift);
  const double zy = -z / r6;
  const double zyy = z / 6.0;
  const double zyyy = -z / (6.0 * r6);
  const double ztau = 5.0 * z / 6.0;
  return {ztau - 5.0 * zyy, 4.0 * zy * zyyy - zyy * zyy - 0.5 * zy * zy};
}

namespace {

// Natural magnitude of psi for first integral K: |K|^(1/4). Lengths scale
// with its inverse and psi'' with its cube.
double natural_scale(const chain::PhiState& p) {
  return std::max(1.0, std::pow(std::abs(p.first_integral()), 0.25));
}

double magnitude_cap(const chain::PhiState& p) {
  return 10.0 * natural_scale(p);
}

double diff_step(double psi, double scale) { return 2e-2 / std::max(scale, std::abs(psi)); }

struct OdeSample {
  double psi, dpsi, psi2;  // value, analytic derivative, Richardson second derivative
};

std::optional<OdeSample> ode_sample(const chain::PhiState& p, double y, double cap) {
  const auto c = p(y);
  if (!c || std::abs(c->phi) > cap) return std::nullopt;
  const double h = diff_step(c->phi, natural_scale(p));
  // Second differences at h, h/2, h/4 combined to O(h^6).
  double d[3];
  for (int level = 0; level < 3; ++level) {
    const double s = h / (1 << level);
    const auto lo = p(y - s);
    const auto hi = p(y + s);
    if (!lo || !hi || std::abs(lo->phi) > 2.0 * cap || std::abs(hi->phi) > 2.0 * cap) {
      return std::nullopt;
    }
    d[level] = (hi->phi - 2.0 * c->phi + lo->phi) / (s * s);
  }
  const double r1 = (4.0 * d[1] - d[0]) / 3.0;
  const double r2 = (4.0 * d[2] - d[1]) / 3.0;
  return OdeSample{c->phi, c->dphi, (16.0 * r2 - r1) / 15.0};
}

}  // namespace

std::vector<double> chain_samples(const chain::PhiState& p, int count, unsigned seed) {
  const double period = 4.0 * elliptic::Modulus(chain::kModulus).quarter_period();
  const double cap = magnitude_cap(p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, period);
  std::vector<double> out;
  for (long attempt = 0; static_cast<int>(out.size()) < count && attempt < 1000L * count; ++attempt) {
    const double y = dist(rng);
    if (ode_sample(p, y, cap)) out.push_back(y);
  }
  return out;
}

OdeReport ode_residual(const chain::PhiState& p, const std::vector<double>& y_samples) {
  OdeReport r;
  r.index = p.index();
  r.kind = p.kind();
  const double c = p.c_sign();
  const double K = p.first_integral();
  const double cap = magnitude_cap(p);
  const double s3 = std::pow(natural_scale(p), 3);
  std::vector<double> integrals;
  for (double y : y_samples) {
    const auto s = ode_sample(p, y, cap);
    if (!s) continue;
    const double cube = c * s->psi * s->psi * s->psi;
    r.second_order_max =
        std::max(r.second_order_max, std::abs(s->psi2 - cube) / std::max(s3, std::abs(cube)));
    const double d2 = s->dpsi * s->dpsi;
    const double q4 = std::pow(s->psi, 4);
    const double I = d2 - 0.5 * c * q4;
    integrals.push_back(I);
    r.first_integral_max_dev =
        std::max(r.first_integral_max_dev, std::abs(I - K) / std::max({1.0, d2, q4}));
  }
  if (integrals.empty()) {
    throw VerificationImpossible("every ODE sample falls on or next to a pole of chain element " +
                                 std::to_string(p.index()));
  }
  r.samples_used = static_cast<int>(integrals.size());
  double mean = 0.0;
  for (double v : integrals) mean += v;
  mean /= integrals.size();
  double var = 0.0;
  for (double v : integrals) var += (v - mean) * (v - mean);
  r.first_integral_mean = mean;
  r.first_integral_std = std::sqrt(var / integrals.size());
  r.C_estimate = mean;
  return r;
}

bool PropositionTable::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const PropositionRow& r) { return r.pass; });
}

PropositionTable proposition_suite(int max_index, int samples, double tolerance) {
  PropositionTable table;
  table.tolerance = tolerance;
  for (int n = 0; n <= max_index; ++n) {
    PropositionRow row;
    row.index = n;
    const chain::PhiState next = chain::phi_chain(n + 1);
    const auto r1 = ode_residual(next, chain_samples(next, samples, 1000u + n));
    row.p1_second_order = r1.second_order_max;
    row.p1_first_integral = r1.first_integral_max_dev;
    bool pass = r1.second_order_max <= tolerance && r1.first_integral_max_dev <= tolerance;
    if (n % 2 == 1) {
      const chain::PhiState t(chain::ChainKind::tilde, n);
      const auto r2 = ode_residual(t, chain_samples(t, samples, 2000u + n));
      row.p2_second_order = r2.second_order_max;
      row.p2_first_integral = r2.first_integral_max_dev;
      pass = pass && r2.second_order_max <= tolerance && r2.first_integral_max_dev <= tolerance;
    } else {
      const chain::PhiState h(chain::ChainKind::hat, n);
      const auto ys = chain_samples(h, samples, 3000u + n);
      const auto r3 = ode_residual(h, ys);
      row.p3_second_order = r3.second_order_max;
      row.p3_first_integral = r3.first_integral_max_dev;
      pass = pass && r3.second_order_max <= tolerance && r3.first_integral_max_dev <= tolerance;
      const double B = h.first_integral();
      double dev = 0.0;
      for (double y : ys) {
        const auto v = h(y);
        if (!v) continue;
        const double d2 = v->dphi * v->dphi;
        const double q4 = std::pow(v->phi, 4);
        dev = std::max(dev, std::abs(d2 + q4 - B * B) / std::max({1.0, d2, q4}));
      }
      row.p3_squared_constant_dev = dev;
    }
    row.pass = pass;
    table.rows.push_back(row);
  }
  return table;
}

void to_json(nlohmann::json& j, const ResidualReport& r) {
  j = nlohmann::json{{"max_abs", r.max_abs},
                     {"l2", r.l2},
                     {"defined_fraction", r.defined_fraction},
                     {"mask", r.mask_note}};
  j["order_estimate"] = r.order_estimate ? nlohmann::json(*r.order_estimate) : nlohmann::json();
  j["order_coarse"] = r.order_coarse ? nlohmann::json(*r.order_coarse) : nlohmann::json();
  auto& levels = j["levels"] = nlohmann::json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"spacing", l.spacing},
                      {"max_abs", l.max_abs},
                      {"l2", l.l2},
                      {"defined_fraction", l.defined_fraction},
                      {"common_max", l.common_max}});
  }
  auto& worst = j["worst"] = nlohmann::json::array();
  for (const auto& w : r.worst) worst.push_back({{"x", w.x}, {"t", w.t}, {"value", w.value}});
}

void to_json(nlohmann::json& j, const OdeReport& r) {
  j = nlohmann::json{{"index", r.index},
                     {"kind", chain::kind_name(r.kind)},
                     {"samples", r.samples_used},
                     {"second_order_max", r.second_order_max},
                     {"first_integral_mean", r.first_integral_mean},
                     {"first_integral_std", r.first_integral_std},
                     {"first_integral_max_dev", r.first_integral_max_dev},
                     {"C_estimate", r.C_estimate}};
}

void to_json(nlohmann::json& j, const PropositionTable& t) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json();
  };
  j = nlohmann::json{{"tolerance", t.tolerance}, {"all_pass", t.all_pass()}};
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"index", r.index},
                    {"p1_second_order", r.p1_second_order},
                    {"p1_first_integral", r.p1_first_integral},
                    {"p2_second_order", opt(r.p2_second_order)},
                    {"p2_first_integral", opt(r.p2_first_integral)},
                    {"p3_second_order", opt(r.p3_second_order)},
                    {"p3_first_integral", opt(r.p3_first_integral)},
                    {"p3_squared_constant_dev", opt(r.p3_squared_constant_dev)},
                    {"pass", r.pass}});
  }
}

}  // namespace rdexact::verify
