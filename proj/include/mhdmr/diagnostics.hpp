#pragma once

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include "mhdmr/grid.hpp"
#include "mhdmr/qtree.hpp"

namespace mhdmr {

// Per-step scalar diagnostics, one CSV row each.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double ch = 0.0;
  double bdiv_max = 0.0;
  double energy = 0.0;
  double helicity_rate = 0.0;
  long leaf_count = 0;
  long virtual_count = 0;
  double dc_running = 0.0;
};

// Compensated accumulator for the conservation ledgers.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// max |d(Bx)/dx + d(By)/dy| by centered differences, ghosts by the grid's
// boundary mode. Adaptive solutions are synthesized to the finest level
// present first, which makes the value mesh-dependent.
double bdiv_max(const UniformGrid& g);
double bdiv_max(const QuadtreeMesh& mesh);

// Domain mean of |u|^2 + |B|^2.
double energy_integral(const UniformGrid& g);
double energy_integral(const QuadtreeMesh& mesh);

// a * domain mean of B . (u x B); identically zero in exact arithmetic.
double helicity_rate(const UniformGrid& g, double a);
double helicity_rate(const QuadtreeMesh& mesh, double a);

// Area-weighted global budgets of all conserved components (Kahan-summed).
std::array<double, kNcomp> budget_totals(const UniformGrid& g);
std::array<double, kNcomp> budget_totals(const QuadtreeMesh& mesh);

// Plain uniform field view used by the error harness.
struct FieldView {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  std::vector<double> rho;  // row-major
};

// L1 error of the density: the reference is block-averaged down to the run
// resolution, then sum |rho_run - rho_ref| * cell area.
double l1_density_error(const FieldView& run, const FieldView& ref);

FieldView density_view(const UniformGrid& g);

// Deterministic shortest-round-trip CSV output.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write(const DiagnosticsRecord& r);

 private:
  std::ofstream out_;
};

std::string format_double(double v);

}  // namespace mhdmr
