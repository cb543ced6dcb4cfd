#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdexact/verify.hpp"

namespace rdexact::cli {

// Exit codes: 0 success, 1 computation error, 2 usage error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

struct FigureSpec {
  int id = 0;
  std::string family;
  nlohmann::json params;
  verify::Grid2D grid;
  std::string caption;
  std::string x_label;
  std::string t_label;
};

const std::vector<FigureSpec>& figure_specs();
// Throws UsageError for an id outside 1..8.
const FigureSpec& figure_spec(int id);

struct FigureData {
  FigureSpec spec;
  std::string csv;
  double defined_fraction = 0.0;
  verify::ResidualReport residual;  // on the family's verification window
};

FigureData figure_data(int id);

// Companion gnuplot script for a CSV with columns x,t,u,defined.
std::string gnuplot_script(const std::string& csv_name, const std::string& title,
                           const std::string& x_label, const std::string& t_label);

}  // namespace rdexact::cli
