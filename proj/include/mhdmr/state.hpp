#pragma once

#include <cmath>

#include "mhdmr/errors.hpp"

namespace mhdmr {

inline constexpr int kNcomp = 9;

// Conserved cell state: density, total energy density, momentum density,
// magnetic field, and the divergence-cleaning scalar psi.
struct ConservedState {
  double rho = 0.0;
  double E = 0.0;
  double mx = 0.0, my = 0.0, mz = 0.0;
  double Bx = 0.0, By = 0.0, Bz = 0.0;
  double psi = 0.0;

  double comp(int k) const {
    switch (k) {
      case 0: return rho;
      case 1: return E;
      case 2: return mx;
      case 3: return my;
      case 4: return mz;
      case 5: return Bx;
      case 6: return By;
      case 7: return Bz;
      default: return psi;
    }
  }
  void set_comp(int k, double v) {
    switch (k) {
      case 0: rho = v; break;
      case 1: E = v; break;
      case 2: mx = v; break;
      case 3: my = v; break;
      case 4: mz = v; break;
      case 5: Bx = v; break;
      case 6: By = v; break;
      case 7: Bz = v; break;
      default: psi = v; break;
    }
  }
};

// Interface flux, one entry per conserved component.
struct FluxVector {
  double rho = 0.0;
  double E = 0.0;
  double mx = 0.0, my = 0.0, mz = 0.0;
  double Bx = 0.0, By = 0.0, Bz = 0.0;
  double psi = 0.0;

  double comp(int k) const {
    switch (k) {
      case 0: return rho;
      case 1: return E;
      case 2: return mx;
      case 3: return my;
      case 4: return mz;
      case 5: return Bx;
      case 6: return By;
      case 7: return Bz;
      default: return psi;
    }
  }
  void set_comp(int k, double v) {
    switch (k) {
      case 0: rho = v; break;
      case 1: E = v; break;
      case 2: mx = v; break;
      case 3: my = v; break;
      case 4: mz = v; break;
      case 5: Bx = v; break;
      case 6: By = v; break;
      case 7: Bz = v; break;
      default: psi = v; break;
    }
  }
};

struct PrimitiveState {
  double rho = 0.0;
  double p = 0.0;
  double ux = 0.0, uy = 0.0, uz = 0.0;
  double Bx = 0.0, By = 0.0, Bz = 0.0;
  double psi = 0.0;
};

// Scheme parameters of the mixed hyperbolic-parabolic cleaning.
struct GlmParams {
  double gamma = 5.0 / 3.0;       // adiabatic constant, > 1
  double c_cfl = 0.3;             // CFL coefficient in (0,1)
  double cp2_over_ch = 0.18;      // ratio c_p^2 / c_h
  double ch = 0.0;                // hyperbolic cleaning speed, set every step
};

// EOS conversions. to_primitive clamps pressures in (-1e-12, 0] to 1e-12
// (and counts the event); anything more negative is an error.
PrimitiveState to_primitive(const ConservedState& q, double gamma);
ConservedState to_conserved(const PrimitiveState& w, double gamma);

long pressure_floor_events();
void reset_pressure_floor_events();

// Physical fluxes of the cleaned system. The psi coupling puts psi in the
// normal-field slot and ch^2 * B_normal in the psi slot.
FluxVector physical_flux_x(const ConservedState& q, double gamma, double ch);
FluxVector physical_flux_y(const ConservedState& q, double gamma, double ch);

// Fast magnetosonic speed for normal field component bn.
double fast_speed(const PrimitiveState& w, double bn, double gamma);

// ch = c_cfl * min(dx,dy) / dt
double compute_ch(double dx, double dy, double dt, double c_cfl);

// One application of the parabolic correction over dt.
inline double psi_damp_factor(double dt, double ch, double cp2_over_ch) {
  return std::exp(-dt * ch / cp2_over_ch);
}

// --- shared per-cell kernels -------------------------------------------------
// Both time integrators (uniform grid and tree) must go through these so the
// eps=0 adaptive run reproduces the uniform run bit for bit.

inline void apply_flux_update(ConservedState& q, const FluxVector& fw,
                              const FluxVector& fe, double lambda) {
  q.rho -= lambda * (fe.rho - fw.rho);
  q.E -= lambda * (fe.E - fw.E);
  q.mx -= lambda * (fe.mx - fw.mx);
  q.my -= lambda * (fe.my - fw.my);
  q.mz -= lambda * (fe.mz - fw.mz);
  q.Bx -= lambda * (fe.Bx - fw.Bx);
  q.By -= lambda * (fe.By - fw.By);
  q.Bz -= lambda * (fe.Bz - fw.Bz);
  q.psi -= lambda * (fe.psi - fw.psi);
}

inline void accumulate(FluxVector& acc, const FluxVector& f, double w) {
  acc.rho += w * f.rho;
  acc.E += w * f.E;
  acc.mx += w * f.mx;
  acc.my += w * f.my;
  acc.mz += w * f.mz;
  acc.Bx += w * f.Bx;
  acc.By += w * f.By;
  acc.Bz += w * f.Bz;
  acc.psi += w * f.psi;
}

inline ConservedState heun_average(const ConservedState& a, const ConservedState& b) {
  ConservedState r;
  r.rho = 0.5 * (a.rho + b.rho);
  r.E = 0.5 * (a.E + b.E);
  r.mx = 0.5 * (a.mx + b.mx);
  r.my = 0.5 * (a.my + b.my);
  r.mz = 0.5 * (a.mz + b.mz);
  r.Bx = 0.5 * (a.Bx + b.Bx);
  r.By = 0.5 * (a.By + b.By);
  r.Bz = 0.5 * (a.Bz + b.Bz);
  r.psi = 0.5 * (a.psi + b.psi);
  return r;
}

// CFL bound of one cell: min over directions of dx / (|u_n| + c_f,n).
double cfl_bound(const ConservedState& q, double gamma, double dx, double dy);

// Coordinate exchange x<->y (momenta and field components swapped).
inline ConservedState swap_xy(const ConservedState& q) {
  ConservedState s = q;
  s.mx = q.my;
  s.my = q.mx;
  s.Bx = q.By;
  s.By = q.Bx;
  return s;
}

inline FluxVector swap_xy(const FluxVector& f) {
  FluxVector s = f;
  s.mx = f.my;
  s.my = f.mx;
  s.Bx = f.By;
  s.By = f.Bx;
  return s;
}

}  // namespace mhdmr
