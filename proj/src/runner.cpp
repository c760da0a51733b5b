#include "mhdmr/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "mhdmr/problems.hpp"

namespace mhdmr {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (mode != "fv-uniform" && mode != "mr") {
    fail("DomainMismatch", "unknown mode '" + mode + "'");
  }
  if (level < 3 || level > 12) {
    fail("DomainMismatch", "level " + std::to_string(level) + " outside [3,12]");
  }
  if (!(t_end > 0.0)) {
    fail("DomainMismatch", "t_end must be positive");
  }
  if (threshold_mode != "harten" && threshold_mode != "constant") {
    fail("DomainMismatch", "unknown threshold mode '" + threshold_mode + "'");
  }
  if (epsilon < 0.0 || epsilon0 < 0.0) {
    fail("DomainMismatch", "thresholds must be non-negative");
  }
  if (!(gamma > 1.0)) {
    fail("DomainMismatch", "gamma must exceed 1");
  }
  if (!(cfl > 0.0 && cfl < 1.0)) {
    fail("DomainMismatch", "cfl must lie in (0,1)");
  }
  if (!(cp2_over_ch > 0.0)) {
    fail("DomainMismatch", "cp2-over-ch must be positive");
  }
  if (boundary != "neumann" && boundary != "periodic") {
    fail("DomainMismatch", "unknown boundary '" + boundary + "'");
  }
  for (double s : snapshots) {
    if (s < 0.0 || s > t_end) {
      fail("DomainMismatch", "snapshot time outside [0, t_end]");
    }
  }
}

BoundaryMode RunConfig::boundary_mode() const {
  return boundary == "periodic" ? BoundaryMode::Periodic : BoundaryMode::Neumann;
}

ThresholdPolicy RunConfig::policy() const {
  ThresholdPolicy pol;
  pol.mode = threshold_mode == "constant" ? ThresholdPolicy::Mode::Constant
                                          : ThresholdPolicy::Mode::Harten;
  pol.epsilon = epsilon;
  pol.epsilon0 = epsilon0;
  pol.domain_area = 4.0;
  pol.dim = 2;
  pol.max_level = level;
  return pol;
}

namespace {

json config_json(const RunConfig& cfg) {
  json j;
  j["problem"] = cfg.problem;
  j["mode"] = cfg.mode;
  j["level"] = cfg.level;
  j["threshold-mode"] = cfg.threshold_mode;
  j["epsilon"] = cfg.epsilon;
  j["epsilon0"] = cfg.epsilon0;
  j["gamma"] = cfg.gamma;
  j["cfl"] = cfg.cfl;
  j["cp2-over-ch"] = cfg.cp2_over_ch;
  j["t-end"] = cfg.t_end;
  j["snapshots"] = cfg.snapshots;
  j["out"] = cfg.out;
  j["psi-damp-per-stage"] = cfg.psi_damp_per_stage;
  j["boundary"] = cfg.boundary;
  return j;
}

std::string snapshot_name(size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%03zu.bin", k);
  return buf;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  const fs::path dir(cfg.out);
  fs::create_directories(dir);

  {
    std::ofstream c(dir / "config.json");
    c << config_json(cfg).dump(2) << '\n';
  }

  std::vector<double> events(cfg.snapshots);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  TimeController tc;
  tc.c_cfl = cfg.cfl;
  tc.t_end = cfg.t_end;
  for (double e : events) {
    if (e > 0.0 && e < cfg.t_end) tc.events.push_back(e);
  }

  GlmParams par;
  par.gamma = cfg.gamma;
  par.c_cfl = cfg.cfl;
  par.cp2_over_ch = cfg.cp2_over_ch;

  const bool is_mr = cfg.mode == "mr";
  const ThresholdPolicy pol = cfg.policy();

  UniformGrid grid;
  std::optional<QuadtreeMesh> mesh_store;
  if (is_mr) {
    mesh_store.emplace(cfg.level, cfg.boundary_mode());
    init_mesh(*mesh_store, cfg.problem, pol);
  } else {
    grid = UniformGrid::square(cfg.level, cfg.boundary_mode());
    init_grid(grid, cfg.problem);
  }
  QuadtreeMesh* mesh_ptr = mesh_store ? &*mesh_store : nullptr;

  const double full_cells = double(1L << cfg.level) * double(1L << cfg.level);
  auto snapshot_now = [&](double t) {
    if (is_mr) {
      const int lf = mesh_ptr->finest_leaf_level();
      return Snapshot::from_grid(mesh_ptr->synthesize(lf), uint32_t(lf), t,
                                 cfg.gamma);
    }
    return Snapshot::from_grid(grid, uint32_t(cfg.level), t, cfg.gamma);
  };
  auto diag_now = [&](double t, double dt, double ch, long leaves, long virtuals,
                      double dc) {
    DiagnosticsRecord r;
    r.t = t;
    r.dt = dt;
    r.ch = ch;
    if (is_mr) {
      r.bdiv_max = bdiv_max(*mesh_ptr);
      r.energy = energy_integral(*mesh_ptr);
      r.helicity_rate = helicity_rate(*mesh_ptr, 1.0);
    } else {
      r.bdiv_max = bdiv_max(grid);
      r.energy = energy_integral(grid);
      r.helicity_rate = helicity_rate(grid, 1.0);
    }
    r.leaf_count = leaves;
    r.virtual_count = virtuals;
    r.dc_running = dc;
    return r;
  };

  RunResult res;
  CsvWriter csv((dir / "diagnostics.csv").string());

  const long leaves0 = is_mr ? mesh_ptr->leaf_count() : long(grid.nx) * grid.ny;
  DiagnosticsRecord r0 =
      diag_now(0.0, 0.0, 0.0, leaves0, 0, 100.0 * double(leaves0) / full_cells);
  csv.write(r0);
  res.history.push_back(r0);

  size_t next_snap = 0;
  if (next_snap < events.size() && events[next_snap] == 0.0) {
    save_snapshot(snapshot_now(0.0), (dir / snapshot_name(next_snap)).string());
    ++next_snap;
  }

  std::vector<long> dc_history;
  long peak_memory = leaves0;
  int steps = 0;
  while (tc.t < tc.t_end) {
    double dt = 0.0, ch = 0.0;
    long leaves = 0, virtuals = 0;
    if (is_mr) {
      const MrStepRecord rec =
          mr_step(*mesh_ptr, tc, par, pol, cfg.psi_damp_per_stage);
      dt = rec.dt;
      ch = rec.ch;
      leaves = rec.adapted_leaves;
      virtuals = rec.virtual_cells;
      peak_memory = std::max(peak_memory, rec.evolved_leaves + rec.virtual_cells);
    } else {
      const StepRecord rec = fv_step(grid, tc, par, cfg.psi_damp_per_stage);
      dt = rec.dt;
      ch = rec.ch;
      leaves = long(grid.nx) * grid.ny;
    }
    ++steps;
    dc_history.push_back(leaves);
    const double dc = compression_ratio(dc_history, cfg.level);
    const DiagnosticsRecord r = diag_now(tc.t, dt, ch, leaves, virtuals, dc);
    csv.write(r);
    res.history.push_back(r);

    while (next_snap < events.size() && events[next_snap] <= tc.t) {
      save_snapshot(snapshot_now(tc.t), (dir / snapshot_name(next_snap)).string());
      ++next_snap;
    }
  }

  res.steps = steps;
  res.t_final = tc.t;
  res.dc_percent = dc_history.empty() ? 100.0 * double(leaves0) / full_cells
                                      : compression_ratio(dc_history, cfg.level);
  res.peak_memory_cells = peak_memory;
  res.final_leaf_count = is_mr ? mesh_ptr->leaf_count() : leaves0;
  res.final_snapshot = snapshot_now(tc.t);
  save_snapshot(res.final_snapshot, (dir / "final.bin").string());

  json summary;
  summary["config"] = config_json(cfg);
  summary["steps"] = res.steps;
  summary["t-final"] = res.t_final;
  summary["dc-percent"] = res.dc_percent;
  summary["peak-memory-cells"] = res.peak_memory_cells;
  summary["final-leaf-count"] = res.final_leaf_count;
  summary["pressure-floor-events"] = pressure_floor_events();
  {
    std::ofstream s(dir / "summary.json");
    s << summary.dump(2) << '\n';
  }
  return res;
}

CompareReport compare(const std::string& run_dir, const std::string& ref_dir) {
  const fs::path rd(run_dir), fd(ref_dir);
  json run_sum, ref_sum;
  {
    std::ifstream a(rd / "summary.json");
    std::ifstream b(fd / "summary.json");
    if (!a || !b) {
      fail("IncompatibleRuns", "missing summary.json");
    }
    a >> run_sum;
    b >> ref_sum;
  }
  if (run_sum["config"]["problem"] != ref_sum["config"]["problem"]) {
    fail("IncompatibleRuns", "runs use different problems");
  }
  const Snapshot run_snap = load_snapshot((rd / "final.bin").string());
  const Snapshot ref_snap = load_snapshot((fd / "final.bin").string());
  if (ref_snap.nx < run_snap.nx) {
    fail("IncompatibleRuns", "reference resolution below run resolution");
  }
  if (run_snap.t != ref_snap.t) {
    fail("IncompatibleRuns", "runs end at different times");
  }

  FieldView run_view, ref_view;
  auto to_view = [](const Snapshot& s) {
    FieldView v;
    v.nx = int(s.nx);
    v.ny = int(s.ny);
    v.dx = s.dx();
    v.dy = s.dy();
    v.rho.resize(size_t(s.nx) * s.ny);
    for (size_t k = 0; k < v.rho.size(); ++k) v.rho[k] = s.cells[k].rho;
    return v;
  };
  run_view = to_view(run_snap);
  ref_view = to_view(ref_snap);

  CompareReport rep;
  rep.l1_density = l1_density_error(run_view, ref_view);
  rep.run_dc_percent = run_sum["dc-percent"].get<double>();
  rep.run_peak_memory_cells = run_sum["peak-memory-cells"].get<long>();
  rep.ref_dc_percent = ref_sum["dc-percent"].get<double>();
  rep.ref_peak_memory_cells = ref_sum["peak-memory-cells"].get<long>();
  return rep;
}

}  // namespace mhdmr
