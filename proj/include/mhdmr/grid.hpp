#pragma once

#include <vector>

#include "mhdmr/state.hpp"

namespace mhdmr {

enum class BoundaryMode { Neumann, Periodic };

// Cell-centred uniform grid with a two-deep ghost frame.
struct UniformGrid {
  int nx = 0, ny = 0;
  double x0 = -1.0, y0 = -1.0;
  double dx = 0.0, dy = 0.0;
  BoundaryMode bc = BoundaryMode::Neumann;
  static constexpr int ng = 2;
  std::vector<ConservedState> cells;  // (nx + 2ng) * (ny + 2ng), row-major

  static UniformGrid square(int level, BoundaryMode bc, double x0 = -1.0,
                            double y0 = -1.0, double width = 2.0);
  static UniformGrid make(int nx, int ny, BoundaryMode bc, double x0, double y0,
                          double width, double height);

  ConservedState& at(int i, int j) {
    return cells[static_cast<size_t>(j + ng) * (nx + 2 * ng) + (i + ng)];
  }
  const ConservedState& at(int i, int j) const {
    return cells[static_cast<size_t>(j + ng) * (nx + 2 * ng) + (i + ng)];
  }
  double xc(int i) const { return x0 + (i + 0.5) * dx; }
  double yc(int j) const { return y0 + (j + 0.5) * dy; }
  double area() const { return (nx * dx) * (ny * dy); }
};

// Zero-gradient (or periodic) ghost fill, all components.
void apply_boundary(UniformGrid& g);

// dt = c_cfl * min over cells of the per-cell CFL bound.
double compute_dt(const UniformGrid& g, double gamma, double c_cfl);

// Step planning shared by both engines: raw CFL step clipped so the run
// lands exactly on snapshot times and on t_end.
struct TimeController {
  double t = 0.0;
  double dt = 0.0;
  double c_cfl = 0.3;
  double t_end = 0.0;
  std::vector<double> events;  // sorted strictly increasing, within (0, t_end)

  struct Plan {
    double dt = 0.0;
    double t_next = 0.0;
    bool hit_event = false;  // landed exactly on an event or on t_end
  };
  Plan plan(double dt_raw) const;
};

// One dimensionally-split sweep; interface fluxes from the frozen input
// state, then q -= (dt/dx) (F_e - F_w) on every interior cell.
void sweep_x(UniformGrid& g, double gamma, double ch, double dt);
void sweep_y(UniformGrid& g, double gamma, double ch, double dt);

// Exact parabolic correction: psi scaled by exp(-dt ch / cp2_over_ch).
void damp_psi(UniformGrid& g, double dt, double ch, double cp2_over_ch);

// Heun step at fixed dt and ch: average of the input state and two
// applications of (sweep_x, sweep_y, optional damping).
void heun_advance(UniformGrid& g, double gamma, double ch, double dt,
                  double cp2_over_ch, bool damp_per_stage);

struct StepRecord {
  double dt = 0.0;
  double ch = 0.0;
  bool hit_event = false;
};

// Full step: CFL dt, event clipping, ch law, Heun advance.
StepRecord fv_step(UniformGrid& g, TimeController& tc, const GlmParams& par,
                   bool damp_per_stage);

}  // namespace mhdmr
