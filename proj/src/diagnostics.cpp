#include "mhdmr/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace mhdmr {

double bdiv_max(const UniformGrid& g) {
  UniformGrid work = g;
  apply_boundary(work);
  double m = 0.0;
  for (int j = 0; j < work.ny; ++j) {
    for (int i = 0; i < work.nx; ++i) {
      const double div =
          (work.at(i + 1, j).Bx - work.at(i - 1, j).Bx) / (2.0 * work.dx) +
          (work.at(i, j + 1).By - work.at(i, j - 1).By) / (2.0 * work.dy);
      m = std::max(m, std::abs(div));
    }
  }
  return m;
}

double bdiv_max(const QuadtreeMesh& mesh) {
  return bdiv_max(mesh.synthesize(mesh.finest_leaf_level()));
}

namespace {

inline double kinetic_magnetic(const ConservedState& q) {
  const double inv = 1.0 / q.rho;
  const double ux = q.mx * inv, uy = q.my * inv, uz = q.mz * inv;
  return ux * ux + uy * uy + uz * uz + q.Bx * q.Bx + q.By * q.By + q.Bz * q.Bz;
}

inline double helicity_density(const ConservedState& q) {
  const double inv = 1.0 / q.rho;
  const double ux = q.mx * inv, uy = q.my * inv, uz = q.mz * inv;
  const double cx = uy * q.Bz - uz * q.By;
  const double cy = uz * q.Bx - ux * q.Bz;
  const double cz = ux * q.By - uy * q.Bx;
  return q.Bx * cx + q.By * cy + q.Bz * cz;
}

}  // namespace

double energy_integral(const UniformGrid& g) {
  KahanSum s;
  const double cell = g.dx * g.dy;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      s.add(kinetic_magnetic(g.at(i, j)) * cell);
    }
  }
  return s.sum / g.area();
}

double energy_integral(const QuadtreeMesh& mesh) {
  KahanSum s;
  mesh.for_each_leaf([&](int l, long, long, const TreeNode& n) {
    s.add(kinetic_magnetic(n.q) * (mesh.dx_at(l) * mesh.dy_at(l)));
  });
  return s.sum / mesh.domain_area();
}

double helicity_rate(const UniformGrid& g, double a) {
  KahanSum s;
  const double cell = g.dx * g.dy;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      s.add(helicity_density(g.at(i, j)) * cell);
    }
  }
  return a * s.sum / g.area();
}

double helicity_rate(const QuadtreeMesh& mesh, double a) {
  KahanSum s;
  mesh.for_each_leaf([&](int l, long, long, const TreeNode& n) {
    s.add(helicity_density(n.q) * (mesh.dx_at(l) * mesh.dy_at(l)));
  });
  return a * s.sum / mesh.domain_area();
}

std::array<double, kNcomp> budget_totals(const UniformGrid& g) {
  std::array<KahanSum, kNcomp> s{};
  const double cell = g.dx * g.dy;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      for (int k = 0; k < kNcomp; ++k) {
        s[k].add(g.at(i, j).comp(k) * cell);
      }
    }
  }
  std::array<double, kNcomp> out{};
  for (int k = 0; k < kNcomp; ++k) out[k] = s[k].sum;
  return out;
}

std::array<double, kNcomp> budget_totals(const QuadtreeMesh& mesh) {
  std::array<KahanSum, kNcomp> s{};
  mesh.for_each_leaf([&](int l, long, long, const TreeNode& n) {
    const double cell = mesh.dx_at(l) * mesh.dy_at(l);
    for (int k = 0; k < kNcomp; ++k) {
      s[k].add(n.q.comp(k) * cell);
    }
  });
  std::array<double, kNcomp> out{};
  for (int k = 0; k < kNcomp; ++k) out[k] = s[k].sum;
  return out;
}

FieldView density_view(const UniformGrid& g) {
  FieldView v;
  v.nx = g.nx;
  v.ny = g.ny;
  v.dx = g.dx;
  v.dy = g.dy;
  v.rho.resize(size_t(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      v.rho[size_t(j) * g.nx + i] = g.at(i, j).rho;
    }
  }
  return v;
}

double l1_density_error(const FieldView& run, const FieldView& ref) {
  if (run.nx <= 0 || ref.nx < run.nx || ref.nx % run.nx != 0 ||
      ref.ny % run.ny != 0 || ref.nx / run.nx != ref.ny / run.ny) {
    fail("IncompatibleDomains", "reference grid does not refine the run grid");
  }
  const int r = ref.nx / run.nx;
  const double inv = 1.0 / (double(r) * double(r));
  KahanSum s;
  const double cell = run.dx * run.dy;
  for (int j = 0; j < run.ny; ++j) {
    for (int i = 0; i < run.nx; ++i) {
      KahanSum block;
      for (int bj = 0; bj < r; ++bj) {
        for (int bi = 0; bi < r; ++bi) {
          block.add(ref.rho[size_t(j * r + bj) * ref.nx + (i * r + bi)]);
        }
      }
      s.add(std::abs(run.rho[size_t(j) * run.nx + i] - block.sum * inv) * cell);
    }
  }
  return s.sum;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) {
    fail("SolverFailure", "cannot open " + path);
  }
  out_ << "t,dt,ch,bdiv_max,energy,helicity_rate,leaf_count,virtual_count,dc_running\n";
}

void CsvWriter::write(const DiagnosticsRecord& r) {
  out_ << format_double(r.t) << ',' << format_double(r.dt) << ','
       << format_double(r.ch) << ',' << format_double(r.bdiv_max) << ','
       << format_double(r.energy) << ',' << format_double(r.helicity_rate) << ','
       << r.leaf_count << ',' << r.virtual_count << ','
       << format_double(r.dc_running) << '\n';
  out_.flush();
}

}  // namespace mhdmr
