#include "rdexact/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "numfmt.hpp"
#include "rdexact/error.hpp"

namespace rdexact::simulate {

using detail::num;

void SimConfig::validate() const {
  if (n_x < 8) throw UsageError("simulation needs at least 8 grid points");
  if (!(x_max > x_min)) throw UsageError("simulation x range must be non-empty");
  if (!(t1 >= t0)) throw UsageError("simulation needs t1 >= t0");
  if (!(safety > 0.0 && safety <= 1.0)) throw UsageError("safety factor must lie in (0, 1]");
  if (space_order != 2 && space_order != 4) throw UsageError("space order must be 2 or 4");
  for (double c : checkpoints) {
    if (c < t0 || c > t1) throw UsageError("checkpoint " + num(c) + " outside [t0, t1]");
  }
}

std::vector<double> SimConfig::checkpoint_times() const {
  std::vector<double> c = checkpoints.empty() ? std::vector<double>{t0, t1} : checkpoints;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

namespace {

class Stepper {
 public:
  Stepper(const EquationSpec& eq, const Sampler& exact, const SimConfig& cfg)
      : eq_(eq), exact_(exact), n_(cfg.n_x), b_(cfg.space_order / 2), order_(cfg.space_order),
        h_(cfg.h()), safety_(cfg.safety) {
    x_.resize(n_);
    for (int i = 0; i < n_; ++i) x_[i] = cfg.x_min + i * h_;
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->assign(n_, 0.0);
  }

  const std::vector<double>& x() const { return x_; }

  std::vector<double> initial(double t) const {
    std::vector<double> u(n_);
    for (int i = 0; i < n_; ++i) {
      const auto v = exact_(x_[i], t);
      if (!v) {
        throw DomainError("initial data undefined at x = " + num(x_[i]) + ", t = " + num(t) +
                          "; choose a window avoiding masked points");
      }
      u[i] = *v;
    }
    return u;
  }

  void step(std::vector<double>& u, double t, double dt, long step_no) {
    rhs(u, k1_, step_no, dt);
    stage(u, k1_, 0.5 * dt, t + 0.5 * dt);
    rhs(tmp_, k2_, step_no, dt);
    stage(u, k2_, 0.5 * dt, t + 0.5 * dt);
    rhs(tmp_, k3_, step_no, dt);
    stage(u, k3_, dt, t + dt);
    rhs(tmp_, k4_, step_no, dt);
    for (int i = b_; i < n_ - b_; ++i) {
      u[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
      if (!std::isfinite(u[i])) fail(step_no, dt, x_[i]);
    }
    pin(u, t + dt);
  }

 private:
  void pin(std::vector<double>& u, double t) const {
    for (int i = 0; i < b_; ++i) {
      for (int idx : {i, n_ - 1 - i}) {
        const auto v = exact_(x_[idx], t);
        if (!v) {
          throw DomainError("boundary value undefined at x = " + num(x_[idx]) + ", t = " + num(t));
        }
        u[idx] = *v;
      }
    }
  }

  void stage(const std::vector<double>& u, const std::vector<double>& k, double a, double t) {
    for (int i = b_; i < n_ - b_; ++i) tmp_[i] = u[i] + a * k[i];
    pin(tmp_, t);
  }

  void rhs(const std::vector<double>& u, std::vector<double>& k, long step_no, double dt) const {
    const double ih2 = 1.0 / (h_ * h_);
    for (int i = b_; i < n_ - b_; ++i) {
      double lap = 0.0;
      if (order_ == 4) {
        lap = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) * ih2 / 12.0;
      } else {
        lap = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2;
      }
      double f = 0.0;
      try {
        f = rhs_eval(eq_, u[i]);
      } catch (const DomainError& e) {
        throw InstabilityError("reaction term left its domain at step " + std::to_string(step_no) +
                               ", x = " + num(x_[i]) + " (dt = " + num(dt) +
                               ", safety = " + num(safety_) + "): " + e.what());
      }
      k[i] = lap + f;
      if (!std::isfinite(k[i])) fail(step_no, dt, x_[i]);
    }
  }

  [[noreturn]] void fail(long step_no, double dt, double x) const {
    throw InstabilityError("non-finite field value at step " + std::to_string(step_no) + ", x = " +
                           num(x) + " (dt = " + num(dt) + ", h = " + num(h_) +
                           ", dt*2/h^2 = " + num(2.0 * dt / (h_ * h_)) + ")");
  }

  const EquationSpec& eq_;
  const Sampler& exact_;
  int n_, b_, order_;
  double h_, safety_;
  std::vector<double> x_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

VelocityFit linear_fit(std::vector<double> times, std::vector<double> pos) {
  VelocityFit f;
  const double n = static_cast<double>(times.size());
  double mt = 0.0;
  double mp = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    mt += times[i];
    mp += pos[i];
  }
  mt /= n;
  mp /= n;
  double stt = 0.0;
  double stp = 0.0;
  double spp = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    stt += (times[i] - mt) * (times[i] - mt);
    stp += (times[i] - mt) * (pos[i] - mp);
    spp += (pos[i] - mp) * (pos[i] - mp);
  }
  f.velocity = stt > 0.0 ? stp / stt : 0.0;
  const double ss_res = spp - f.velocity * stp;
  f.r2 = spp > 0.0 ? 1.0 - std::max(0.0, ss_res) / spp : 1.0;
  f.times = std::move(times);
  f.positions = std::move(pos);
  return f;
}

double cubic_interp(const std::vector<double>& x, const std::vector<double>& u, double at) {
  const int n = static_cast<int>(x.size());
  const double h = x[1] - x[0];
  int i = static_cast<int>(std::floor((at - x[0]) / h));
  i = std::clamp(i, 1, n - 3);
  const double s = (at - x[i]) / h;
  const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return w0 * u[i - 1] + w1 * u[i] + w2 * u[i + 1] + w3 * u[i + 2];
}

}  // namespace

History integrate(const EquationSpec& eq, const Sampler& init, const SimConfig& cfg) {
  cfg.validate();
  Stepper st(eq, init, cfg);
  History h;
  h.x = st.x();
  const double dt_max = cfg.safety * cfg.h() * cfg.h() / 2.0;
  std::vector<double> u = st.initial(cfg.t0);
  double t = cfg.t0;
  for (double tc : cfg.checkpoint_times()) {
    const double span = tc - t;
    if (span > 0.0) {
      const long n = static_cast<long>(std::ceil(span / dt_max - 1e-9));
      const double dt = span / n;
      h.dt = std::max(h.dt, dt);
      for (long s = 0; s < n; ++s) {
        // Recompute from the segment start to avoid accumulating t += dt drift.
        st.step(u, t + s * dt, dt, h.steps + 1);
        ++h.steps;
      }
      t = tc;
    }
    h.times.push_back(tc);
    h.fields.push_back(u);
  }
  return h;
}

std::optional<double> level_crossing(const std::vector<double>& x, const std::vector<double>& u,
                                     double level) {
  std::optional<double> where;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const bool a = u[i] >= level;
    const bool b = u[i + 1] >= level;
    if (a == b) continue;
    if (where) throw AmbiguousFront("level " + num(level) + " crossed more than once in a profile");
    const double frac = (level - u[i]) / (u[i + 1] - u[i]);
    where = x[i] + frac * (x[i + 1] - x[i]);
  }
  return where;
}

VelocityFit front_velocity(const History& h, double level) {
  std::vector<double> times;
  std::vector<double> pos;
  for (std::size_t k = 0; k < h.fields.size(); ++k) {
    const auto c = level_crossing(h.x, h.fields[k], level);
    if (!c) continue;
    times.push_back(h.times[k]);
    pos.push_back(*c);
  }
  if (times.size() < 2 || times.size() < 0.8 * h.fields.size()) {
    throw AmbiguousFront("level " + num(level) + " crossed inside the domain in only " +
                         std::to_string(times.size()) + " of " +
                         std::to_string(h.fields.size()) + " checkpoints");
  }
  return linear_fit(std::move(times), std::move(pos));
}

Registration register_profiles(const std::vector<double>& x, const std::vector<double>& a,
                               const std::vector<double>& b, double max_shift) {
  const double h = x[1] - x[0];
  const double lo = x[1];
  const double hi = x[x.size() - 3];
  const auto cost = [&](double s) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double at = x[i] - s;
      if (at < lo || at > hi) continue;
      const double d = b[i] - cubic_interp(x, a, at);
      sum += d * d;
      ++n;
    }
    return n > 0 ? sum / n : INFINITY;
  };
  double best = 0.0;
  double best_cost = cost(0.0);
  const int steps = static_cast<int>(std::ceil(max_shift / (0.5 * h)));
  for (int i = -steps; i <= steps; ++i) {
    const double s = i * 0.5 * h;
    const double c = cost(s);
    if (c < best_cost) {
      best_cost = c;
      best = s;
    }
  }
  // Golden-section refinement inside the bracketing cells.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double l = best - 0.5 * h;
  double r = best + 0.5 * h;
  double m1 = r - g * (r - l);
  double m2 = l + g * (r - l);
  double c1 = cost(m1);
  double c2 = cost(m2);
  for (int it = 0; it < 80 && r - l > 1e-13 * std::max(1.0, std::abs(best)); ++it) {
    if (c1 < c2) {
      r = m2;
      m2 = m1;
      c2 = c1;
      m1 = r - g * (r - l);
      c1 = cost(m1);
    } else {
      l = m1;
      m1 = m2;
      c1 = c2;
      m2 = l + g * (r - l);
      c2 = cost(m2);
    }
  }
  Registration reg;
  reg.shift = 0.5 * (l + r);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double at = x[i] - reg.shift;
    if (at < lo || at > hi) continue;
    reg.shape_error = std::max(reg.shape_error, std::abs(b[i] - cubic_interp(x, a, at)));
  }
  return reg;
}

RegistrationFit registration_velocity(const History& h, double max_shift) {
  if (h.fields.size() < 2) throw AmbiguousFront("registration needs at least two checkpoints");
  std::vector<double> times;
  std::vector<double> pos;
  RegistrationFit out;
  for (std::size_t k = 0; k < h.fields.size(); ++k) {
    const auto reg = register_profiles(h.x, h.fields.front(), h.fields[k], max_shift);
    times.push_back(h.times[k]);
    pos.push_back(reg.shift);
    out.shape_error = reg.shape_error;
  }
  out.fit = linear_fit(std::move(times), std::move(pos));
  return out;
}

SimReport compare_exact(const History& h, const Sampler& s, std::optional<double> level) {
  SimReport rep;
  rep.dt = h.dt;
  rep.steps = h.steps;
  for (std::size_t k = 0; k < h.fields.size(); ++k) {
    CheckpointError e;
    e.t = h.times[k];
    double sumsq = 0.0;
    for (std::size_t i = 0; i < h.x.size(); ++i) {
      const auto v = s(h.x[i], e.t);
      if (!v) {
        throw ComparisonDomainError("exact solution undefined at x = " + num(h.x[i]) +
                                    ", t = " + num(e.t) + "; shrink the comparison window");
      }
      const double d = std::abs(h.fields[k][i] - *v);
      e.max_abs = std::max(e.max_abs, d);
      sumsq += d * d;
    }
    e.l2 = std::sqrt(sumsq / h.x.size());
    rep.errors.push_back(e);
  }
  if (level) {
    const VelocityFit f = front_velocity(h, *level);
    rep.measured_velocity = f.velocity;
    rep.velocity_fit_r2 = f.r2;
  }
  return rep;
}

History translated_history(const std::vector<double>& x, const std::vector<double>& times,
                           double v, const std::function<double(double)>& profile) {
  History h;
  h.x = x;
  h.times = times;
  for (double t : times) {
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = profile(x[i] - v * t);
    h.fields.push_back(std::move(u));
  }
  return h;
}

void to_json(nlohmann::json& j, const SimReport& r) {
  j = nlohmann::json{{"dt", r.dt}, {"steps", r.steps}};
  auto& errs = j["checkpoints"] = nlohmann::json::array();
  for (const auto& e : r.errors) errs.push_back({{"t", e.t}, {"max_abs", e.max_abs}, {"l2", e.l2}});
  j["measured_velocity"] = r.measured_velocity ? nlohmann::json(*r.measured_velocity)
                                               : nlohmann::json();
  j["velocity_fit_r2"] = r.velocity_fit_r2 ? nlohmann::json(*r.velocity_fit_r2) : nlohmann::json();
}

}  // namespace rdexact::simulate
