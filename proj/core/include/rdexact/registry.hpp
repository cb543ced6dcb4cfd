#pragma once

// Named solution families with default parameters, a verification window and
// a simulation plan, as exposed on the command line.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdexact/catalog.hpp"
#include "rdexact/simulate.hpp"
#include "rdexact/verify.hpp"

namespace rdexact::registry {

enum class VelocityMethod { none, level, registration };

struct SimPlan {
  simulate::SimConfig config;
  VelocityMethod method = VelocityMethod::none;
  double level = 0.5;
  double max_shift = 1.0;
  std::optional<double> predicted_velocity;
  // Equation integrated; the sampler's own equation unless overridden.
  EquationSpec equation;
};

struct FamilyInfo {
  std::string id;
  std::string formula;
  nlohmann::json defaults;
  std::function<Sampler(const nlohmann::json&)> build;
  std::function<verify::Grid2D(const nlohmann::json&)> verify_grid;
  std::function<SimPlan(const nlohmann::json&, const Sampler&)> sim_plan;
};

const std::vector<FamilyInfo>& families();

// Throws UsageError listing the valid ids.
const FamilyInfo& find_family(std::string_view id);

// Defaults overlaid with the given parameters. Throws UsageError on a key
// the family does not take.
nlohmann::json resolve_params(const FamilyInfo& f, const nlohmann::json& params);

Sampler make_sampler(std::string_view id, const nlohmann::json& params = nlohmann::json::object());

}  // namespace rdexact::registry
