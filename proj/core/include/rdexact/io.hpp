#pragma once

// CSV and JSON output. Files are written to a temporary name and renamed into
// place.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdexact/catalog.hpp"
#include "rdexact/verify.hpp"

namespace rdexact::io {

// %.16e, or "nan" for a non-finite value.
std::string format_value(double v);

struct GridSample {
  std::string csv;  // header x,t,u,defined
  long defined = 0;
  long total = 0;
  double defined_fraction() const { return total ? static_cast<double>(defined) / total : 0.0; }
};

// Rows ordered by t, then x. Undefined points carry u = nan and defined = 0.
GridSample sample_grid(const Sampler& s, const verify::Grid2D& g);

// Header x,u.
std::string profile_csv(const std::vector<double>& x, const std::vector<double>& u);

// Throws Error when the file cannot be written.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> outputs;
};

std::string utc_timestamp();

void to_json(nlohmann::json& j, const RunManifest& m);

}  // namespace rdexact::io
