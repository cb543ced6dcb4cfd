#include <cmath>
#include <string>

#include "cli/commands.hpp"
#include "rdexact/error.hpp"
#include "rdexact/io.hpp"
#include "rdexact/registry.hpp"

namespace rdexact::cli {

namespace {

std::vector<FigureSpec> build_specs() {
  const verify::Grid2D chain_window{-3.0, 3.0, 121, 0.5, 200.0, 400};
  const verify::Grid2D fisher_window{0.0, 5.0, 101, 2.5, 4.0, 61};
  std::vector<FigureSpec> s;
  s.push_back({1, "elliptic/u", {{"index", 0}}, chain_window, "u = 2x ds(x^2 + 6t, 1/sqrt 2)", "x", "t"});
  s.push_back({2, "elliptic/u", {{"index", 1}}, chain_window, "u = 2x cs/dn (x^2 + 6t, 1/sqrt 2), 0 < t <= 200", "x", "t"});
  s.push_back({3, "elliptic/tilde", {{"index", 1}}, chain_window, "tilde u_1", "x", "t"});
  s.push_back({4, "elliptic/hat", {{"index", 0}}, chain_window, "hat u_0 = x sd(x^2 + 6t, 1/sqrt 2)", "x", "t"});
  s.push_back({5, "elliptic/hat", {{"index", 2}}, chain_window, "hat u_2", "x", "t"});
  s.push_back({6, "fisher/weierstrass", {{"C", 1e2}, {"k", 0.0}}, fisher_window, "Weierstrass Fisher solution, k = 0, C = 1e2", "y", "tau"});
  s.push_back({7, "fisher/weierstrass", {{"C", 1e4}, {"k", 0.0}}, fisher_window, "Weierstrass Fisher solution, k = 0, C = 1e4", "y", "tau"});
  s.push_back({8, "fisher/weierstrass", {{"C", 1e6}, {"k", 0.0}}, fisher_window, "Weierstrass Fisher solution, k = 0, C = 1e6", "y", "tau"});
  return s;
}

}  // namespace

const std::vector<FigureSpec>& figure_specs() {
  static const std::vector<FigureSpec> specs = build_specs();
  return specs;
}

const FigureSpec& figure_spec(int id) {
  if (id < 1 || id > static_cast<int>(figure_specs().size())) {
    throw UsageError("figure id must be in 1.." + std::to_string(figure_specs().size()) +
                     ", got " + std::to_string(id));
  }
  return figure_specs()[id - 1];
}

FigureData figure_data(int id) {
  FigureData d;
  d.spec = figure_spec(id);
  const auto& family = registry::find_family(d.spec.family);
  const auto params = registry::resolve_params(family, d.spec.params);
  const Sampler s = family.build(params);
  const auto sample = io::sample_grid(s, d.spec.grid);
  d.csv = sample.csv;
  d.defined_fraction = sample.defined_fraction();
  d.residual = verify::pde_residual(s, s.equation, family.verify_grid(params), 4);
  return d;
}

std::string gnuplot_script(const std::string& csv_name, const std::string& title,
                           const std::string& x_label, const std::string& t_label) {
  std::string g;
  g += "set datafile separator ','\n";
  g += "set title '" + title + "'\n";
  g += "set xlabel '" + x_label + "'\n";
  g += "set ylabel '" + t_label + "'\n";
  g += "set zlabel 'u'\n";
  g += "set hidden3d\n";
  g += "splot '" + csv_name + "' every ::1 using 1:2:($4 > 0 ? $3 : NaN) with points pt 0 notitle\n";
  g += "pause -1\n";
  return g;
}

}  // namespace rdexact::cli
