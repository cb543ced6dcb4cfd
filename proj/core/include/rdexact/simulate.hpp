#pragma once

// Method-of-lines integration of u_t = u_xx + f(u) with classical RK4 and
// boundary nodes pinned to an exact sampler.

#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rdexact/catalog.hpp"
#include "rdexact/equations.hpp"

namespace rdexact::simulate {

struct SimConfig {
  double x_min = -10.0;
  double x_max = 10.0;
  int n_x = 401;
  double t0 = 0.0;
  double t1 = 1.0;
  double safety = 0.5;   // dt <= safety * h^2 / 2
  int space_order = 4;   // 2 or 4
  std::vector<double> checkpoints;  // empty: t0 and t1

  // Throws UsageError for inconsistent settings.
  void validate() const;
  double h() const { return (x_max - x_min) / (n_x - 1); }
  std::vector<double> checkpoint_times() const;
};

struct History {
  std::vector<double> x;
  std::vector<double> times;
  std::vector<std::vector<double>> fields;  // one profile per checkpoint
  double dt = 0.0;  // largest step actually taken
  long steps = 0;
};

// Throws DomainError when init is undefined somewhere at t0 or on the
// boundary, InstabilityError on a non-finite field value.
History integrate(const EquationSpec& eq, const Sampler& init, const SimConfig& cfg);

struct VelocityFit {
  double velocity = 0.0;
  double r2 = 0.0;
  std::vector<double> times;
  std::vector<double> positions;
};

// Position of the single crossing of the level in a profile, by linear
// interpolation; nullopt when the level is not crossed. Throws AmbiguousFront
// for more than one crossing.
std::optional<double> level_crossing(const std::vector<double>& x, const std::vector<double>& u,
                                     double level);

// Least-squares fit of crossing position against time. The level must be
// crossed at no more than one place in every profile and inside the domain for
// at least 80% of checkpoints; otherwise AmbiguousFront.
VelocityFit front_velocity(const History& h, double level = 0.5);

struct Registration {
  double shift = 0.0;
  double shape_error = 0.0;  // max |u_b(x) - u_a(x - shift)| over the overlap
};

// Shift s minimising the squared difference between b(x) and a(x - s), with a
// interpolated by cubic Lagrange polynomials.
Registration register_profiles(const std::vector<double>& x, const std::vector<double>& a,
                               const std::vector<double>& b, double max_shift);

struct RegistrationFit {
  VelocityFit fit;
  double shape_error = 0.0;  // at the last checkpoint
};

// Shifts of every checkpoint profile against the first, fitted linearly.
RegistrationFit registration_velocity(const History& h, double max_shift);

struct CheckpointError {
  double t = 0.0;
  double max_abs = 0.0;
  double l2 = 0.0;  // root mean square
};

struct SimReport {
  std::vector<CheckpointError> errors;
  std::optional<double> measured_velocity;
  std::optional<double> velocity_fit_r2;
  double dt = 0.0;
  long steps = 0;
};

// Error norms against the exact sampler at every checkpoint, plus the front
// velocity when a level is given. Throws ComparisonDomainError when the
// sampler is undefined at a checkpoint grid point.
SimReport compare_exact(const History& h, const Sampler& s, std::optional<double> level = {});

// Synthetic history u(x - v t) for testing the velocity machinery.
History translated_history(const std::vector<double>& x, const std::vector<double>& times,
                           double v, const std::function<double(double)>& profile);

void to_json(nlohmann::json& j, const SimReport& r);

}  // namespace rdexact::simulate
