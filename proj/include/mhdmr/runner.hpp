#pragma once

#include <string>
#include <vector>

#include "mhdmr/diagnostics.hpp"
#include "mhdmr/snapshot.hpp"

namespace mhdmr {

// One run of the solver; every field mirrors a CLI flag.
struct RunConfig {
  std::string problem = "riemann2d";
  std::string mode = "fv-uniform";  // "fv-uniform" | "mr"
  int level = 6;
  std::string threshold_mode = "harten";  // "harten" | "constant"
  double epsilon = 0.0;
  double epsilon0 = 0.01;
  double gamma = 5.0 / 3.0;
  double cfl = 0.3;
  double cp2_over_ch = 0.18;
  double t_end = 0.1;
  std::vector<double> snapshots;
  std::string out = "out";
  bool psi_damp_per_stage = true;
  std::string boundary = "neumann";  // "neumann" | "periodic"

  void validate() const;
  BoundaryMode boundary_mode() const;
  ThresholdPolicy policy() const;
};

struct RunResult {
  int steps = 0;
  double t_final = 0.0;
  double dc_percent = 0.0;
  long peak_memory_cells = 0;
  long final_leaf_count = 0;
  Snapshot final_snapshot;
  std::vector<DiagnosticsRecord> history;
};

// Executes the configured run, writing diagnostics.csv, config.json,
// requested snapshot_<k>.bin files, final.bin and summary.json into out/.
RunResult run(const RunConfig& cfg);

struct CompareReport {
  double l1_density = 0.0;
  double run_dc_percent = 0.0;
  long run_peak_memory_cells = 0;
  double ref_dc_percent = 0.0;
  long ref_peak_memory_cells = 0;
};

// Error harness: compares a run directory against a same-problem reference
// directory of at least the run's resolution.
CompareReport compare(const std::string& run_dir, const std::string& ref_dir);

}  // namespace mhdmr
