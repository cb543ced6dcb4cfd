#pragma once

// Numerical verification by central differences on exactly sampled fields.
//
// A residual is evaluated at every point of a grid with three stencil
// spacings (4h, 2h, h), h being the grid spacing. Samples are taken on a
// padded grid so that every stencil stays on sampled nodes. A stencil is
// skipped when an undefined sample lies within five stencil reaches of its
// centre.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rdexact/catalog.hpp"
#include "rdexact/chain.hpp"
#include "rdexact/equations.hpp"

namespace rdexact::verify {

struct Grid2D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_x = 8;
  double t_min = 0.0;
  double t_max = 1.0;
  int n_t = 8;

  // Throws UsageError unless n_x, n_t >= 8 and both ranges are non-empty.
  void validate() const;
  double hx() const { return (x_max - x_min) / (n_x - 1); }
  double ht() const { return (t_max - t_min) / (n_t - 1); }
};

struct Offender {
  double x = 0.0;
  double t = 0.0;
  double value = 0.0;
};

struct LevelStats {
  int spacing = 1;  // stencil spacing in grid cells
  double max_abs = 0.0;
  double l2 = 0.0;  // root mean square over defined stencils
  double defined_fraction = 0.0;
  double common_max = 0.0;  // max over stencils defined at every level
};

struct ResidualReport {
  // Finest level.
  double max_abs = 0.0;
  double l2 = 0.0;
  double defined_fraction = 0.0;
  // log2 of the ratio of common-point max residuals for spacings 2h and h;
  // present only when every level had defined_fraction > 0.5.
  std::optional<double> order_estimate;
  std::optional<double> order_coarse;  // same for 4h and 2h
  std::vector<LevelStats> levels;       // coarse to fine
  std::vector<Offender> worst;          // up to 10, finest level
  std::string mask_note;
};

// R = u_t - u_xx - f(u). stencil_order is 2 or 4. Throws
// VerificationImpossible when fewer than 10% of stencils are usable.
ResidualReport pde_residual(const Sampler& s, const EquationSpec& eq, const Grid2D& g,
                            int stencil_order = 4);

struct PotentialParams {
  double k = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
};

// z (z_x z_tx - z_x z_xxx - l3 z z_x - l4 z^2 - (k-1) z_xx^2)
//   - z_x^2 (z_t + l1 z + l2 z_x - (2k+1) z_xx)
// with fourth-order differences (seven-point third derivative).
ResidualReport potential_residual(const Potential& z, const PotentialParams& p, const Grid2D& g);

struct ReducedSystem {
  double heat = 0.0;       // z_tau - 5 z_yy
  double quadratic = 0.0;  // 4 z_y z_yyy - z_yy^2 - z_y^2 / 2
};

// Analytic derivatives of z = exp(-y/sqrt 6 + 5 tau/6 + k).
ReducedSystem fisher_reduced_system(double y, double tau, double k_shift = 0.0);

struct OdeReport {
  int index = 0;
  chain::ChainKind kind = chain::ChainKind::plain;
  int samples_used = 0;
  // max |psi'' - c psi^3| / max(s^3, |c psi^3|), s = max(1, |K|^(1/4)), psi'' by
  // second differences extrapolated to O(h^6)
  double second_order_max = 0.0;
  // (psi')^2 - (c/2) psi^4 from the analytic pair
  double first_integral_mean = 0.0;
  double first_integral_std = 0.0;
  double C_estimate = 0.0;
  // max |I - K| / max(1, (psi')^2, psi^4) against the exact constant K
  double first_integral_max_dev = 0.0;
};

// Samples where the element is undefined (or too close to a pole for the
// difference stencil) are skipped. Throws VerificationImpossible if none remain.
OdeReport ode_residual(const chain::PhiState& p, const std::vector<double>& y_samples);

// Deterministic non-pole sample set for a chain element: count points in
// (0, 4K) where |psi| stays below a magnitude cap.
std::vector<double> chain_samples(const chain::PhiState& p, int count, unsigned seed = 12345);

struct PropositionRow {
  int index = 0;
  // Chain step: phi_{n+1} solves phi'' = 2 phi^3.
  double p1_second_order = 0.0;
  double p1_first_integral = 0.0;
  // Tilde transform (odd n): sqrt(C_n)/phi_n solves (psi')^2 = psi^4 + C_n.
  std::optional<double> p2_second_order;
  std::optional<double> p2_first_integral;
  // Hat transform (even n): sqrt(B_n)/phi_n solves psi'' = -2 psi^3 and
  // (psi')^2 = -psi^4 + B_n.
  std::optional<double> p3_second_order;
  std::optional<double> p3_first_integral;
  // Spread of (psi')^2 + psi^4 - B_n^2 across samples, i.e. how far that
  // constant is from the one actually conserved.
  std::optional<double> p3_squared_constant_dev;
  bool pass = false;
};

struct PropositionTable {
  double tolerance = 1e-7;
  std::vector<PropositionRow> rows;
  bool all_pass() const;
};

PropositionTable proposition_suite(int max_index = 6, int samples = 200, double tolerance = 1e-7);

void to_json(nlohmann::json& j, const ResidualReport& r);
void to_json(nlohmann::json& j, const OdeReport& r);
void to_json(nlohmann::json& j, const PropositionTable& t);

}  // namespace rdexact::verify
