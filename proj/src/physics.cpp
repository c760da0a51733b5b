#include "mhdmr/state.hpp"

#include <atomic>
#include <string>

namespace mhdmr {

namespace {
std::atomic<long> g_pressure_floor_events{0};
}

long pressure_floor_events() { return g_pressure_floor_events.load(); }
void reset_pressure_floor_events() { g_pressure_floor_events.store(0); }

PrimitiveState to_primitive(const ConservedState& q, double gamma) {
  if (!(q.rho > 0.0)) {
    fail("NonPositiveDensity", "rho = " + std::to_string(q.rho));
  }
  PrimitiveState w;
  w.rho = q.rho;
  const double inv = 1.0 / q.rho;
  w.ux = q.mx * inv;
  w.uy = q.my * inv;
  w.uz = q.mz * inv;
  w.Bx = q.Bx;
  w.By = q.By;
  w.Bz = q.Bz;
  w.psi = q.psi;
  const double kin = 0.5 * q.rho * (w.ux * w.ux + w.uy * w.uy + w.uz * w.uz);
  const double mag = 0.5 * (q.Bx * q.Bx + q.By * q.By + q.Bz * q.Bz);
  double p = (gamma - 1.0) * (q.E - kin - mag);
  if (p <= 0.0) {
    // Tolerate roundoff-level negatives without masking real failures.
    if (p > -1e-12) {
      p = 1e-12;
      g_pressure_floor_events.fetch_add(1, std::memory_order_relaxed);
    } else {
      fail("NonPositivePressure", "p = " + std::to_string(p));
    }
  }
  w.p = p;
  return w;
}

ConservedState to_conserved(const PrimitiveState& w, double gamma) {
  if (!(w.rho > 0.0)) {
    fail("NonPositiveDensity", "rho = " + std::to_string(w.rho));
  }
  if (!(w.p > 0.0)) {
    fail("NonPositivePressure", "p = " + std::to_string(w.p));
  }
  ConservedState q;
  q.rho = w.rho;
  q.mx = w.rho * w.ux;
  q.my = w.rho * w.uy;
  q.mz = w.rho * w.uz;
  q.Bx = w.Bx;
  q.By = w.By;
  q.Bz = w.Bz;
  q.psi = w.psi;
  const double kin = 0.5 * w.rho * (w.ux * w.ux + w.uy * w.uy + w.uz * w.uz);
  const double mag = 0.5 * (w.Bx * w.Bx + w.By * w.By + w.Bz * w.Bz);
  q.E = w.p / (gamma - 1.0) + kin + mag;
  return q;
}

FluxVector physical_flux_x(const ConservedState& q, double gamma, double ch) {
  const PrimitiveState w = to_primitive(q, gamma);
  const double b2 = q.Bx * q.Bx + q.By * q.By + q.Bz * q.Bz;
  const double pT = w.p + 0.5 * b2;
  const double udotB = w.ux * q.Bx + w.uy * q.By + w.uz * q.Bz;
  FluxVector f;
  f.rho = q.mx;
  f.E = (q.E + pT) * w.ux - udotB * q.Bx;
  f.mx = q.mx * w.ux + pT - q.Bx * q.Bx;
  f.my = q.my * w.ux - q.Bx * q.By;
  f.mz = q.mz * w.ux - q.Bx * q.Bz;
  f.Bx = q.psi;
  f.By = w.ux * q.By - q.Bx * w.uy;
  f.Bz = w.ux * q.Bz - q.Bx * w.uz;
  f.psi = (ch * ch) * q.Bx;
  return f;
}

FluxVector physical_flux_y(const ConservedState& q, double gamma, double ch) {
  const PrimitiveState w = to_primitive(q, gamma);
  const double b2 = q.Bx * q.Bx + q.By * q.By + q.Bz * q.Bz;
  const double pT = w.p + 0.5 * b2;
  const double udotB = w.ux * q.Bx + w.uy * q.By + w.uz * q.Bz;
  FluxVector f;
  f.rho = q.my;
  f.E = (q.E + pT) * w.uy - udotB * q.By;
  f.mx = q.mx * w.uy - q.By * q.Bx;
  f.my = q.my * w.uy + pT - q.By * q.By;
  f.mz = q.mz * w.uy - q.By * q.Bz;
  f.Bx = w.uy * q.Bx - q.By * w.ux;
  f.By = q.psi;
  f.Bz = w.uy * q.Bz - q.By * w.uz;
  f.psi = (ch * ch) * q.By;
  return f;
}

double fast_speed(const PrimitiveState& w, double bn, double gamma) {
  const double gp = gamma * w.p;
  const double b2 = w.Bx * w.Bx + w.By * w.By + w.Bz * w.Bz;
  const double s = gp + b2;
  double disc = s * s - 4.0 * gp * (bn * bn);
  // disc >= (gp - b2)^2 in exact arithmetic since bn^2 <= b2
  if (disc < 0.0) {
    if (disc < -1e-15) {
      fail("NegativeDiscriminant", "fast speed discriminant = " + std::to_string(disc));
    }
    disc = 0.0;
  }
  return std::sqrt((s + std::sqrt(disc)) / (2.0 * w.rho));
}

double compute_ch(double dx, double dy, double dt, double c_cfl) {
  if (!(dt > 0.0)) {
    fail("ZeroTimeStep", "dt = " + std::to_string(dt));
  }
  return c_cfl * std::min(dx, dy) / dt;
}

double cfl_bound(const ConservedState& q, double gamma, double dx, double dy) {
  const PrimitiveState w = to_primitive(q, gamma);
  const double cfx = fast_speed(w, w.Bx, gamma);
  const double cfy = fast_speed(w, w.By, gamma);
  return std::min(dx / (std::abs(w.ux) + cfx), dy / (std::abs(w.uy) + cfy));
}

}  // namespace mhdmr
