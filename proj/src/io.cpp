#include "aklt/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aklt {

std::vector<double> RunConfig::grid() const {
  if (grid_count < 1) throw std::invalid_argument("config: grid count must be >= 1");
  if (grid_start < 0.0 || grid_stop > 1.0 || grid_start > grid_stop)
    throw std::invalid_argument("config: grid bounds must satisfy 0 <= start <= stop <= 1");
  std::vector<double> g;
  if (grid_count == 1) {
    g.push_back(grid_start);
    return g;
  }
  if (grid_log) {
    if (grid_start <= 0.0) throw std::invalid_argument("config: log grid requires start > 0");
    const double la = std::log(grid_start), lb = std::log(grid_stop);
    for (int k = 0; k < grid_count; ++k)
      g.push_back(std::exp(la + (lb - la) * k / (grid_count - 1)));
  } else {
    for (int k = 0; k < grid_count; ++k)
      g.push_back(grid_start + (grid_stop - grid_start) * k / (grid_count - 1));
  }
  return g;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  std::istringstream v(value);
  if (key == "lattice") cfg.lattice = lattice_kind_from_name(value);
  else if (key == "dims") {
    int a = 0, b = 1;
    v >> a;
    if (!(v >> b)) b = 1;
    cfg.dims = {a, b};
  } else if (key == "boundary")
    cfg.boundary = value == "open" ? Boundary::open : Boundary::periodic;
  else if (key == "grid_start") v >> cfg.grid_start;
  else if (key == "grid_stop") v >> cfg.grid_stop;
  else if (key == "grid_count") v >> cfg.grid_count;
  else if (key == "grid_spacing") cfg.grid_log = value != "linear";
  else if (key == "tol") v >> cfg.tol;
  else if (key == "seed") v >> cfg.seed;
  else if (key == "out") cfg.out_path = value;
  else if (key == "cap_dense") v >> cfg.cap_dense;
  else if (key == "cap_sparse") v >> cfg.cap_sparse;
  else throw std::invalid_argument("config: unknown key " + key);
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void write_gap_scan_csv(const std::string& path, const std::vector<GapScanRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output: " + path);
  out << "# schema_version " << kSchemaVersion << "\n";
  out << "delta,E0,E1,gap,graph_fidelity,converged\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.delta << ',' << r.e0 << ',' << r.e1 << ',' << r.gap << ',' << r.graph_fidelity
        << ',' << (r.converged ? 1 : 0) << '\n';
}

std::string report_to_json(const CheckReport& report) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = report.name;
  j["anchor"] = report.anchor;
  j["pass"] = report.pass;
  j["residual"] = report.residual;
  j["params"] = report.params;
  return j.dump();
}

std::string certificate_to_json(const GapCertificate& cert) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["lattice"] = cert.lattice;
  j["region"] = cert.region;
  j["r"] = cert.r;
  j["delta"] = cert.delta;
  j["gamma_min"] = cert.gamma_min;
  j["gamma_max"] = cert.gamma_max;
  j["ratio"] = cert.ratio;
  j["mu0"] = cert.mu0;
  j["verdict"] = cert.verdict == Verdict::certified_gapped ? "certified_gapped" : "not_certified";
  j["rank_tolerance"] = cert.rank_tolerance;
  return j.dump();
}

}  // namespace aklt
