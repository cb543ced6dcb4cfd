#include "rdexact/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "rdexact/error.hpp"

namespace rdexact::io {

std::string format_value(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

GridSample sample_grid(const Sampler& s, const verify::Grid2D& g) {
  g.validate();
  GridSample out;
  out.csv = "x,t,u,defined\n";
  const double hx = g.hx();
  const double ht = g.ht();
  for (int j = 0; j < g.n_t; ++j) {
    const double t = g.t_min + j * ht;
    for (int i = 0; i < g.n_x; ++i) {
      const double x = g.x_min + i * hx;
      const auto u = s(x, t);
      const bool ok = u && std::isfinite(*u);
      out.csv += format_value(x);
      out.csv += ',';
      out.csv += format_value(t);
      out.csv += ',';
      out.csv += ok ? format_value(*u) : "nan";
      out.csv += ok ? ",1\n" : ",0\n";
      ++out.total;
      if (ok) ++out.defined;
    }
  }
  return out;
}

std::string profile_csv(const std::vector<double>& x, const std::vector<double>& u) {
  std::string out = "x,u\n";
  for (std::size_t i = 0; i < x.size() && i < u.size(); ++i) {
    out += format_value(x[i]) + ',' + format_value(u[i]) + '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"schema", 1},
       {"command", m.command},
       {"parameters", m.parameters},
       {"version", m.version},
       {"timestamp", m.timestamp},
       {"outputs", m.outputs}};
}

}  // namespace rdexact::io
