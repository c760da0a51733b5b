#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhdmr/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"2D GLM-MHD finite volume solver with adaptive multiresolution"};
  app.require_subcommand(1);

  mhdmr::RunConfig cfg;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a solver run");
  run_cmd->set_config("--config", "", "flat key=value config file; flags override");
  run_cmd->add_option("--problem", cfg.problem, "problem id (riemann2d, uniform, psi-gauss)");
  run_cmd->add_option("--mode", cfg.mode, "fv-uniform or mr");
  run_cmd->add_option("--level", cfg.level, "finest refinement level (3..12)");
  run_cmd->add_option("--threshold-mode", cfg.threshold_mode, "harten or constant");
  run_cmd->add_option("--epsilon", cfg.epsilon, "constant-mode threshold");
  run_cmd->add_option("--epsilon0", cfg.epsilon0, "level-dependent base threshold");
  run_cmd->add_option("--gamma", cfg.gamma, "adiabatic constant");
  run_cmd->add_option("--cfl", cfg.cfl, "CFL coefficient");
  run_cmd->add_option("--cp2-over-ch", cfg.cp2_over_ch, "parabolic/hyperbolic ratio");
  run_cmd->add_option("--t-end", cfg.t_end, "final time");
  run_cmd->add_option("--snapshots", cfg.snapshots, "snapshot times")->delimiter(',');
  run_cmd->add_option("--out", cfg.out, "output directory");
  run_cmd->add_flag("--psi-damp-per-stage,!--no-psi-damp-per-stage",
                    cfg.psi_damp_per_stage, "apply damping inside each stage");
  run_cmd->add_option("--boundary", cfg.boundary, "neumann or periodic");

  std::string cmp_run, cmp_ref;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "error report of a run vs a reference run");
  cmp_cmd->add_option("run_dir", cmp_run, "run directory")->required();
  cmp_cmd->add_option("ref_dir", cmp_ref, "reference directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const mhdmr::RunResult res = mhdmr::run(cfg);
      std::printf("steps: %d\n", res.steps);
      std::printf("t_final: %.17g\n", res.t_final);
      std::printf("Dc_percent: %.4f\n", res.dc_percent);
      std::printf("peak_memory_cells: %ld\n", res.peak_memory_cells);
      std::printf("final_leaf_count: %ld\n", res.final_leaf_count);
    } else if (*cmp_cmd) {
      const mhdmr::CompareReport rep = mhdmr::compare(cmp_run, cmp_ref);
      std::printf("L1_error_rho: %.6e\n", rep.l1_density);
      std::printf("Dc_percent: %.4f (ref %.4f)\n", rep.run_dc_percent,
                  rep.ref_dc_percent);
      std::printf("peak_memory_cells: %ld (ref %ld)\n", rep.run_peak_memory_cells,
                  rep.ref_peak_memory_cells);
    }
  } catch (const mhdmr::Error& e) {
    nlohmann::json err;
    err["error"] = e.kind();
    err["message"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = "Unexpected";
    err["message"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 0;
}
