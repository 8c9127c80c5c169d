#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aklt/gap_certifier.hpp"
#include "aklt/lattice.hpp"
#include "aklt/verification.hpp"

namespace aklt {

constexpr int kSchemaVersion = 1;

/// Run configuration shared by the CLI subcommands. Flat key-value config
/// files use the same field names; command-line flags override file values.
struct RunConfig {
  LatticeKind lattice = LatticeKind::ring;
  std::pair<int, int> dims{6, 1};
  Boundary boundary = Boundary::periodic;

  double grid_start = 0.003;
  double grid_stop = 0.3;
  int grid_count = 5;
  bool grid_log = true;

  double tol = 1e-9;
  std::uint64_t seed = 12345;
  std::string out_path;
  std::int64_t cap_dense = 4096;
  std::int64_t cap_sparse = 20'000'000;

  std::vector<double> grid() const;
};

/// Parse a flat key-value config file ("key = value" lines, '#' comments).
RunConfig read_config(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

struct GapScanRow {
  double delta = 0;
  double e0 = 0, e1 = 0, gap = 0;
  double graph_fidelity = 0;
  bool converged = false;
};

void write_gap_scan_csv(const std::string& path, const std::vector<GapScanRow>& rows);

std::string certificate_to_json(const GapCertificate& cert);

std::string report_to_json(const CheckReport& report);

}  // namespace aklt
