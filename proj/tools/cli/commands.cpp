#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdexact/chain.hpp"
#include "rdexact/error.hpp"
#include "rdexact/io.hpp"
#include "rdexact/registry.hpp"
#include "rdexact/simulate.hpp"
#include "rdexact/verify.hpp"

namespace rdexact::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (v.size() != count) {
    throw UsageError(std::string(what) + " needs " + std::to_string(count) +
                     " comma-separated numbers, got " + std::to_string(v.size()));
  }
  return v;
}

verify::Grid2D parse_grid(const std::string& text) {
  const auto v = parse_numbers(text, 6, "--grid x_min,x_max,n_x,t_min,t_max,n_t");
  verify::Grid2D g{v[0], v[1], static_cast<int>(v[2]), v[3], v[4], static_cast<int>(v[5])};
  if (v[2] != g.n_x || v[5] != g.n_t) throw UsageError("grid point counts must be integers");
  g.validate();
  return g;
}

json parse_params(const std::string& text) {
  if (text.empty()) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("--params is not valid JSON: ") + e.what());
  }
}

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Outputs {
  std::vector<std::string> files;

  void write(const fs::path& path, const std::string& content) {
    io::write_atomic(path, content);
    files.push_back(path.string());
  }
};

void write_manifest(const fs::path& path, const std::string& command, const json& parameters,
                    Outputs& outputs) {
  io::RunManifest m;
  m.command = command;
  m.parameters = parameters;
  m.version = RDEXACT_VERSION;
  m.timestamp = io::utc_timestamp();
  m.outputs = outputs.files;
  m.outputs.push_back(path.string());
  io::write_atomic(path, json(m).dump(2) + "\n");
}

struct FamilyArgs {
  std::string family;
  std::string params;

  void add_to(CLI::App* sub) {
    sub->add_option("--family", family, "Family id (see `list`)")->required();
    sub->add_option("--params", params, "JSON object overriding default parameters");
  }

  std::pair<const registry::FamilyInfo*, json> resolve() const {
    const auto& f = registry::find_family(family);
    return {&f, registry::resolve_params(f, parse_params(params))};
  }
};

void summarize(std::ostream& out, const verify::ResidualReport& r) {
  out << "max |R|          " << fmt(r.max_abs) << "\n";
  out << "rms R            " << fmt(r.l2) << "\n";
  out << "defined fraction " << fmt(r.defined_fraction, 4) << "\n";
  out << "observed order   "
      << (r.order_estimate ? fmt(*r.order_estimate, 4) : std::string("n/a")) << " (fine), "
      << (r.order_coarse ? fmt(*r.order_coarse, 4) : std::string("n/a")) << " (coarse)\n";
  for (const auto& l : r.levels) {
    out << "  spacing " << l.spacing << "h: max " << fmt(l.max_abs) << ", common max "
        << fmt(l.common_max) << ", defined " << fmt(l.defined_fraction, 4) << "\n";
  }
  if (!r.mask_note.empty()) out << "mask: " << r.mask_note << "\n";
}

// list ---------------------------------------------------------------------

void cmd_list(std::ostream& out) {
  json arr = json::array();
  for (const auto& f : registry::families()) {
    const Sampler s = f.build(f.defaults);
    arr.push_back({{"id", f.id},
                   {"formula", f.formula},
                   {"equation", describe(s.equation)},
                   {"equation_spec", s.equation},
                   {"defaults", f.defaults},
                   {"domain_note", s.domain_note}});
  }
  out << json{{"schema", 1}, {"families", arr}}.dump(2) << "\n";
}

// sample -------------------------------------------------------------------

struct SampleArgs {
  FamilyArgs fam;
  std::string grid;
  std::string out_path;
  bool gnuplot = false;
  std::string manifest;
};

void cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  const auto [f, params] = a.fam.resolve();
  const Sampler s = f->build(params);
  const verify::Grid2D g = a.grid.empty() ? f->verify_grid(params) : parse_grid(a.grid);
  const auto sample = io::sample_grid(s, g);
  if (sample.defined < sample.total) {
    err << "warning: " << (sample.total - sample.defined) << " of " << sample.total
        << " points undefined (defined_fraction " << fmt(sample.defined_fraction(), 4) << "): "
        << s.domain_note << "\n";
  }
  if (a.out_path.empty()) {
    if (a.gnuplot) throw UsageError("--gnuplot needs --out");
    out << sample.csv;
    return;
  }
  Outputs outputs;
  outputs.write(a.out_path, sample.csv);
  if (a.gnuplot) {
    const fs::path csv(a.out_path);
    fs::path script = csv;
    script.replace_extension(".gp");
    outputs.write(script, gnuplot_script(csv.filename().string(), f->id, "x", "t"));
  }
  if (!a.manifest.empty()) {
    write_manifest(a.manifest, "sample", {{"family", f->id}, {"params", params}, {"grid", a.grid}},
                   outputs);
  }
  out << "wrote " << a.out_path << " (defined_fraction " << fmt(sample.defined_fraction(), 4)
      << ")\n";
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
  FamilyArgs fam;
  std::string grid;
  int order = 4;
  bool json_only = false;
  std::string out_path;
};

void cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto [f, params] = a.fam.resolve();
  const Sampler s = f->build(params);
  const verify::Grid2D g = a.grid.empty() ? f->verify_grid(params) : parse_grid(a.grid);
  const auto report = verify::pde_residual(s, s.equation, g, a.order);
  json j = {{"schema", 1},
            {"family", f->id},
            {"params", params},
            {"equation", describe(s.equation)},
            {"grid",
             {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_x", g.n_x},
              {"t_min", g.t_min}, {"t_max", g.t_max}, {"n_t", g.n_t}}},
            {"stencil_order", a.order},
            {"report", report}};
  if (!a.out_path.empty()) io::write_atomic(a.out_path, j.dump(2) + "\n");
  if (a.json_only) {
    out << j.dump(2) << "\n";
    return;
  }
  out << f->id << " " << params.dump() << "\n" << describe(s.equation) << "\n";
  summarize(out, report);
}

// ode-check ----------------------------------------------------------------

struct OdeArgs {
  int index = 0;
  std::string kind = "u";
  int samples = 200;
};

chain::ChainKind parse_kind(const std::string& k) {
  if (k == "u" || k == "plain") return chain::ChainKind::plain;
  if (k == "tilde") return chain::ChainKind::tilde;
  if (k == "hat") return chain::ChainKind::hat;
  throw UsageError("unknown chain kind '" + k + "'; valid kinds: u, tilde, hat");
}

void cmd_ode(const OdeArgs& a, std::ostream& out) {
  const chain::PhiState p(parse_kind(a.kind), a.index);
  const auto samples = verify::chain_samples(p, a.samples);
  const auto report = verify::ode_residual(p, samples);
  const auto table = verify::proposition_suite(std::max(6, a.index), a.samples);
  out << json{{"schema", 1}, {"ode", report}, {"propositions", table}}.dump(2) << "\n";
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
  FamilyArgs fam;
  std::string window;
  int checkpoints = 0;
  double safety = 0.0;
  int space_order = 0;
  std::string out_dir;
};

registry::SimPlan make_plan(const registry::FamilyInfo& f, const json& params, const Sampler& s,
                            const std::string& window, int checkpoints, double safety,
                            int space_order) {
  registry::SimPlan plan = f.sim_plan(params, s);
  auto& c = plan.config;
  if (!window.empty()) {
    const auto v = parse_numbers(window, 5, "--window x_min,x_max,h,t0,t1");
    if (!(v[2] > 0.0)) throw UsageError("--window spacing h must be positive");
    c.x_min = v[0];
    c.x_max = v[1];
    c.n_x = static_cast<int>(std::lround((v[1] - v[0]) / v[2])) + 1;
    c.t0 = v[3];
    c.t1 = v[4];
    if (checkpoints == 0) checkpoints = std::max<int>(1, static_cast<int>(c.checkpoints.size()) - 1);
  }
  if (checkpoints > 0) {
    c.checkpoints.clear();
    for (int i = 0; i <= checkpoints; ++i) {
      c.checkpoints.push_back(c.t0 + (c.t1 - c.t0) * i / checkpoints);
    }
  }
  if (safety > 0.0) c.safety = safety;
  if (space_order > 0) c.space_order = space_order;
  c.validate();
  return plan;
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto [f, params] = a.fam.resolve();
  const Sampler s = f->build(params);
  const auto plan = make_plan(*f, params, s, a.window, a.checkpoints, a.safety, a.space_order);
  const auto history = simulate::integrate(plan.equation, s, plan.config);
  std::optional<double> level;
  if (plan.method == registry::VelocityMethod::level) level = plan.level;
  auto report = simulate::compare_exact(history, s, level);
  json j = {{"schema", 1}, {"family", f->id}, {"params", params}, {"report", report}};
  if (plan.method == registry::VelocityMethod::registration) {
    const auto reg = simulate::registration_velocity(history, plan.max_shift);
    j["registration"] = {{"velocity", reg.fit.velocity},
                         {"r2", reg.fit.r2},
                         {"shape_error", reg.shape_error}};
  }
  if (plan.predicted_velocity) j["predicted_velocity"] = *plan.predicted_velocity;
  if (!a.out_dir.empty()) {
    const fs::path dir(a.out_dir);
    Outputs outputs;
    for (std::size_t i = 0; i < history.times.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "checkpoint_%03zu.csv", i);
      outputs.write(dir / name, io::profile_csv(history.x, history.fields[i]));
    }
    outputs.write(dir / "report.json", j.dump(2) + "\n");
    write_manifest(dir / "manifest.json", "simulate",
                   {{"family", f->id}, {"params", params}, {"window", a.window}}, outputs);
  }
  out << j.dump(2) << "\n";
}

// velocity -----------------------------------------------------------------

struct VelocityArgs {
  FamilyArgs fam;
  std::optional<double> level;
  std::string window;
};

void cmd_velocity(const VelocityArgs& a, std::ostream& out) {
  const auto [f, params] = a.fam.resolve();
  const Sampler s = f->build(params);
  auto plan = make_plan(*f, params, s, a.window, 0, 0.0, 0);
  if (a.level) {
    plan.method = registry::VelocityMethod::level;
    plan.level = *a.level;
  }
  if (plan.method == registry::VelocityMethod::none) {
    throw UsageError(f->id + " has no front to track; pass --level");
  }
  const auto history = simulate::integrate(plan.equation, s, plan.config);
  double measured = 0.0;
  double r2 = 0.0;
  std::string method;
  if (plan.method == registry::VelocityMethod::level) {
    const auto fit = simulate::front_velocity(history, plan.level);
    measured = fit.velocity;
    r2 = fit.r2;
    method = "level " + fmt(plan.level);
  } else {
    const auto fit = simulate::registration_velocity(history, plan.max_shift);
    measured = fit.fit.velocity;
    r2 = fit.fit.r2;
    method = "registration";
  }
  out << "family      " << f->id << " " << params.dump() << "\n";
  out << "method      " << method << "\n";
  out << "predicted   " << (plan.predicted_velocity ? fmt(*plan.predicted_velocity, 7) : "n/a")
      << "\n";
  out << "measured    " << fmt(measured, 7) << " (r2 " << fmt(r2, 6) << ")\n";
  if (plan.predicted_velocity && *plan.predicted_velocity != 0.0) {
    const double rel = std::abs(measured - *plan.predicted_velocity) /
                       std::abs(*plan.predicted_velocity);
    out << "rel. error  " << fmt(rel, 3) << "\n";
  }
}

// chain --------------------------------------------------------------------

void cmd_chain(int depth, bool as_json, std::ostream& out) {
  if (depth < 0) throw UsageError("--depth must be non-negative");
  json rows = json::array();
  for (int n = 0; n <= depth; ++n) {
    const auto inv = chain::pole_inventory(n);
    rows.push_back({{"index", n},
                    {"C", chain::chain_constant(n)},
                    {"period", inv.period},
                    {"poles", inv.poles}});
  }
  if (as_json) {
    out << json{{"schema", 1}, {"chain", rows}}.dump(2) << "\n";
    return;
  }
  out << "  n            C_n  poles in [0, 4K)\n";
  for (const auto& r : rows) {
    char head[64];
    std::snprintf(head, sizeof head, "%3d %14.6g  ", r["index"].get<int>(), r["C"].get<double>());
    out << head;
    const auto& poles = r["poles"];
    out << poles.size() << ":";
    for (const auto& p : poles) out << " " << fmt(p.get<double>(), 8);
    out << "\n";
  }
}

// figures ------------------------------------------------------------------

void cmd_figures(const std::vector<int>& ids, const std::string& out_dir, bool gnuplot,
                 std::ostream& out) {
  const fs::path dir(out_dir);
  Outputs outputs;
  json summary = json::array();
  for (int id : ids) {
    const FigureData d = figure_data(id);
    char name[32];
    std::snprintf(name, sizeof name, "figure_%d.csv", id);
    outputs.write(dir / name, d.csv);
    if (gnuplot) {
      std::snprintf(name, sizeof name, "figure_%d.gp", id);
      char csv_name[32];
      std::snprintf(csv_name, sizeof csv_name, "figure_%d.csv", id);
      outputs.write(dir / name,
                    gnuplot_script(csv_name, d.spec.caption, d.spec.x_label, d.spec.t_label));
    }
    const auto& g = d.spec.grid;
    summary.push_back({{"id", id},
                       {"family", d.spec.family},
                       {"params", d.spec.params},
                       {"caption", d.spec.caption},
                       {"window",
                        {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_x", g.n_x},
                         {"t_min", g.t_min}, {"t_max", g.t_max}, {"n_t", g.n_t}}},
                       {"defined_fraction", d.defined_fraction},
                       {"residual", d.residual}});
    out << "figure " << id << ": " << d.spec.family << " " << d.spec.params.dump()
        << " defined_fraction " << fmt(d.defined_fraction, 4) << ", residual max "
        << fmt(d.residual.max_abs, 3) << ", order "
        << (d.residual.order_estimate ? fmt(*d.residual.order_estimate, 3) : "n/a") << "\n";
  }
  outputs.write(dir / "figures.json", json{{"schema", 1}, {"figures", summary}}.dump(2) + "\n");
  write_manifest(dir / "manifest.json", "figures", {{"ids", ids}, {"gnuplot", gnuplot}}, outputs);
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solutions of reaction-diffusion equations: sampling, verification, simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RDEXACT_VERSION);

  auto* list = app.add_subcommand("list", "Enumerate solution families (JSON)");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Sample a family on a grid as CSV x,t,u,defined");
  sample.fam.add_to(sample_cmd);
  sample_cmd->add_option("--grid", sample.grid, "x_min,x_max,n_x,t_min,t_max,n_t");
  sample_cmd->add_option("--out", sample.out_path, "CSV file (default: stdout)");
  sample_cmd->add_flag("--gnuplot", sample.gnuplot, "Write a companion gnuplot script");
  sample_cmd->add_option("--manifest", sample.manifest, "Run manifest JSON path");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "PDE residual and observed convergence order");
  ver.fam.add_to(verify_cmd);
  verify_cmd->add_option("--grid", ver.grid, "x_min,x_max,n_x,t_min,t_max,n_t");
  verify_cmd->add_option("--order", ver.order, "Stencil order (2 or 4)")->check(CLI::IsMember({2, 4}));
  verify_cmd->add_flag("--json", ver.json_only, "Print the JSON report instead of the summary");
  verify_cmd->add_option("--out", ver.out_path, "Also write the JSON report here");

  OdeArgs ode;
  auto* ode_cmd = app.add_subcommand("ode-check", "First-integral and proposition checks on the chain");
  ode_cmd->add_option("--chain-index", ode.index, "Chain index n")->required()->check(CLI::Range(0, 40));
  ode_cmd->add_option("--kind", ode.kind, "u, tilde or hat");
  ode_cmd->add_option("--samples", ode.samples, "Sample count")->check(CLI::Range(1, 1000000));

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Integrate from exact initial data and compare");
  sim.fam.add_to(sim_cmd);
  sim_cmd->add_option("--window", sim.window, "x_min,x_max,h,t0,t1");
  sim_cmd->add_option("--checkpoints", sim.checkpoints, "Number of checkpoint intervals");
  sim_cmd->add_option("--safety", sim.safety, "dt <= safety h^2 / 2");
  sim_cmd->add_option("--space-order", sim.space_order, "2 or 4");
  sim_cmd->add_option("--out-dir", sim.out_dir, "Directory for checkpoint CSVs and report");

  VelocityArgs vel;
  auto* vel_cmd = app.add_subcommand("velocity", "Measured against predicted front velocity");
  vel.fam.add_to(vel_cmd);
  vel_cmd->add_option("--level", vel.level, "Level to track (default: the family's)");
  vel_cmd->add_option("--window", vel.window, "x_min,x_max,h,t0,t1");

  int depth = 4;
  bool chain_json = false;
  auto* chain_cmd = app.add_subcommand("chain", "C_n table and pole inventory");
  chain_cmd->add_option("--depth", depth, "Largest chain index")->check(CLI::Range(0, 12));
  chain_cmd->add_flag("--json", chain_json, "JSON output");

  std::vector<int> figure_ids;
  std::string figure_dir = "figures";
  bool figure_gnuplot = false;
  auto* fig_cmd = app.add_subcommand("figures", "Plot data for the figure windows");
  fig_cmd->add_option("--id", figure_ids, "Figure ids (1..8); default all")->check(CLI::Range(1, 8));
  fig_cmd->add_option("--out-dir", figure_dir, "Output directory");
  fig_cmd->add_flag("--gnuplot", figure_gnuplot, "Write gnuplot scripts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) cmd_list(out);
    if (sample_cmd->parsed()) cmd_sample(sample, out, err);
    if (verify_cmd->parsed()) cmd_verify(ver, out);
    if (ode_cmd->parsed()) cmd_ode(ode, out);
    if (sim_cmd->parsed()) cmd_simulate(sim, out);
    if (vel_cmd->parsed()) cmd_velocity(vel, out);
    if (chain_cmd->parsed()) cmd_chain(depth, chain_json, out);
    if (fig_cmd->parsed()) {
      if (figure_ids.empty()) {
        for (const auto& s : figure_specs()) figure_ids.push_back(s.id);
      }
      cmd_figures(figure_ids, figure_dir, figure_gnuplot, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: bad parameter value: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rdexact::cli
