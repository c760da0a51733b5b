#include "mhdmr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mhdmr/riemann.hpp"

namespace mhdmr {

UniformGrid UniformGrid::square(int level, BoundaryMode bc, double x0, double y0,
                                double width) {
  const int n = 1 << level;
  return make(n, n, bc, x0, y0, width, width);
}

UniformGrid UniformGrid::make(int nx, int ny, BoundaryMode bc, double x0,
                              double y0, double width, double height) {
  UniformGrid g;
  g.nx = nx;
  g.ny = ny;
  g.bc = bc;
  g.x0 = x0;
  g.y0 = y0;
  g.dx = width / nx;
  g.dy = height / ny;
  g.cells.assign(static_cast<size_t>(nx + 2 * ng) * (ny + 2 * ng), ConservedState{});
  return g;
}

void apply_boundary(UniformGrid& g) {
  const int nx = g.nx, ny = g.ny, ng = UniformGrid::ng;
  if (g.bc == BoundaryMode::Neumann) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 1; k <= ng; ++k) {
        g.at(-k, j) = g.at(0, j);
        g.at(nx - 1 + k, j) = g.at(nx - 1, j);
      }
    }
    for (int i = -ng; i < nx + ng; ++i) {
      for (int k = 1; k <= ng; ++k) {
        g.at(i, -k) = g.at(i, 0);
        g.at(i, ny - 1 + k) = g.at(i, ny - 1);
      }
    }
  } else {
    for (int j = 0; j < ny; ++j) {
      for (int k = 1; k <= ng; ++k) {
        g.at(-k, j) = g.at(nx - k, j);
        g.at(nx - 1 + k, j) = g.at(k - 1, j);
      }
    }
    for (int i = -ng; i < nx + ng; ++i) {
      const int iw = ((i % nx) + nx) % nx;
      for (int k = 1; k <= ng; ++k) {
        g.at(i, -k) = g.at(iw, ny - k);
        g.at(i, ny - 1 + k) = g.at(iw, k - 1);
      }
    }
  }
}

double compute_dt(const UniformGrid& g, double gamma, double c_cfl) {
  if (g.nx <= 0 || g.ny <= 0) {
    fail("EmptyGrid", "compute_dt on empty grid");
  }
  double bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      bound = std::min(bound, cfl_bound(g.at(i, j), gamma, g.dx, g.dy));
    }
  }
  return c_cfl * bound;
}

TimeController::Plan TimeController::plan(double dt_raw) const {
  if (!(dt_raw > 0.0) || !std::isfinite(dt_raw)) {
    fail("SolverFailure", "invalid time step " + std::to_string(dt_raw));
  }
  double target = t_end;
  for (double e : events) {
    if (e > t && e < target) {
      target = e;
      break;
    }
  }
  Plan p;
  if (dt_raw >= target - t) {
    p.dt = target - t;
    p.t_next = target;
    p.hit_event = true;
  } else {
    p.dt = dt_raw;
    p.t_next = t + dt_raw;
  }
  return p;
}

void sweep_x(UniformGrid& g, double gamma, double ch, double dt) {
  apply_boundary(g);
  const double lambda = dt / g.dx;
  std::vector<FluxVector> flux(g.nx + 1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      try {
        flux[i] = hlld_flux_x(g.at(i - 1, j), g.at(i, j), gamma, ch);
      } catch (const Error& e) {
        fail(e.kind().c_str(), std::string(e.what()) + " at x-interface (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    for (int i = 0; i < g.nx; ++i) {
      apply_flux_update(g.at(i, j), flux[i], flux[i + 1], lambda);
    }
  }
}

void sweep_y(UniformGrid& g, double gamma, double ch, double dt) {
  apply_boundary(g);
  const double lambda = dt / g.dy;
  std::vector<FluxVector> flux(g.ny + 1);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j <= g.ny; ++j) {
      try {
        flux[j] = hlld_flux_y(g.at(i, j - 1), g.at(i, j), gamma, ch);
      } catch (const Error& e) {
        fail(e.kind().c_str(), std::string(e.what()) + " at y-interface (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    for (int j = 0; j < g.ny; ++j) {
      apply_flux_update(g.at(i, j), flux[j], flux[j + 1], lambda);
    }
  }
}

void damp_psi(UniformGrid& g, double dt, double ch, double cp2_over_ch) {
  const double f = psi_damp_factor(dt, ch, cp2_over_ch);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      g.at(i, j).psi *= f;
    }
  }
}

namespace {

void split_advance(UniformGrid& g, double gamma, double ch, double dt,
                   double cp2_over_ch, bool damp_per_stage) {
  sweep_x(g, gamma, ch, dt);
  sweep_y(g, gamma, ch, dt);
  if (damp_per_stage) {
    damp_psi(g, dt, ch, cp2_over_ch);
  }
}

}  // namespace

void heun_advance(UniformGrid& g, double gamma, double ch, double dt,
                  double cp2_over_ch, bool damp_per_stage) {
  std::vector<ConservedState> saved(g.cells);
  split_advance(g, gamma, ch, dt, cp2_over_ch, damp_per_stage);
  split_advance(g, gamma, ch, dt, cp2_over_ch, damp_per_stage);
  const int stride = g.nx + 2 * UniformGrid::ng;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const size_t k =
          static_cast<size_t>(j + UniformGrid::ng) * stride + (i + UniformGrid::ng);
      g.cells[k] = heun_average(saved[k], g.cells[k]);
    }
  }
  if (!damp_per_stage) {
    damp_psi(g, dt, ch, cp2_over_ch);
  }
}

StepRecord fv_step(UniformGrid& g, TimeController& tc, const GlmParams& par,
                   bool damp_per_stage) {
  const double dt_raw = compute_dt(g, par.gamma, tc.c_cfl);
  const TimeController::Plan plan = tc.plan(dt_raw);
  const double ch = compute_ch(g.dx, g.dy, plan.dt, tc.c_cfl);
  heun_advance(g, par.gamma, ch, plan.dt, par.cp2_over_ch, damp_per_stage);
  tc.t = plan.t_next;
  tc.dt = plan.dt;
  StepRecord rec;
  rec.dt = plan.dt;
  rec.ch = ch;
  rec.hit_event = plan.hit_event;
  return rec;
}

}  // namespace mhdmr
