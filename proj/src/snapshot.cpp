#include "mhdmr/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace mhdmr {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");
static_assert(sizeof(ConservedState) == kNcomp * sizeof(double),
              "cells are written as raw interleaved f64");

namespace {

constexpr char kMagic[8] = {'M', 'H', 'D', 'G', 'L', 'M', '0', '1'};
constexpr uint32_t kVersion = 1;

struct Header {
  char magic[8];
  uint32_t version;
  uint32_t level;
  uint32_t nx;
  uint32_t ny;
  uint32_t ncomp;
  uint32_t reserved;
  double t;
  double gamma;
  double xmin;
  double ymin;
};
static_assert(sizeof(Header) == 64, "fixed 64-byte snapshot header");

}  // namespace

Snapshot Snapshot::from_grid(const UniformGrid& g, uint32_t level, double t,
                             double gamma) {
  Snapshot s;
  s.level = level;
  s.nx = g.nx;
  s.ny = g.ny;
  s.t = t;
  s.gamma = gamma;
  s.xmin = g.x0;
  s.ymin = g.y0;
  s.cells.resize(size_t(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      s.cells[size_t(j) * g.nx + i] = g.at(i, j);
    }
  }
  return s;
}

UniformGrid Snapshot::to_grid(BoundaryMode bc) const {
  UniformGrid g = UniformGrid::make(int(nx), int(ny), bc, xmin, ymin,
                                    -2.0 * xmin, -2.0 * ymin);
  for (uint32_t j = 0; j < ny; ++j) {
    for (uint32_t i = 0; i < nx; ++i) {
      g.at(int(i), int(j)) = cells[size_t(j) * nx + i];
    }
  }
  return g;
}

void save_snapshot(const Snapshot& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail("SolverFailure", "cannot open " + path);
  }
  Header h{};
  std::memcpy(h.magic, kMagic, sizeof(kMagic));
  h.version = kVersion;
  h.level = s.level;
  h.nx = s.nx;
  h.ny = s.ny;
  h.ncomp = uint32_t(kNcomp);
  h.reserved = 0;
  h.t = s.t;
  h.gamma = s.gamma;
  h.xmin = s.xmin;
  h.ymin = s.ymin;
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(reinterpret_cast<const char*>(s.cells.data()),
            std::streamsize(s.cells.size() * sizeof(ConservedState)));
  if (!out) {
    fail("SolverFailure", "short write to " + path);
  }
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail("SolverFailure", "cannot open " + path);
  }
  Header h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, kMagic, sizeof(kMagic)) != 0 ||
      h.version != kVersion || h.ncomp != uint32_t(kNcomp)) {
    fail("SolverFailure", "bad snapshot header in " + path);
  }
  Snapshot s;
  s.level = h.level;
  s.nx = h.nx;
  s.ny = h.ny;
  s.t = h.t;
  s.gamma = h.gamma;
  s.xmin = h.xmin;
  s.ymin = h.ymin;
  s.cells.resize(size_t(h.nx) * h.ny);
  in.read(reinterpret_cast<char*>(s.cells.data()),
          std::streamsize(s.cells.size() * sizeof(ConservedState)));
  if (!in) {
    fail("SolverFailure", "short read from " + path);
  }
  return s;
}

}  // namespace mhdmr
