#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mhdmr/grid.hpp"

namespace mhdmr {

// Flat little-endian binary field dump: a 64-byte header (magic, version,
// level, nx, ny, component count, t, gamma, origin) followed by row-major
// cells with the nine components interleaved as f64.
struct Snapshot {
  uint32_t level = 0;
  uint32_t nx = 0, ny = 0;
  double t = 0.0;
  double gamma = 0.0;
  double xmin = -1.0, ymin = -1.0;
  std::vector<ConservedState> cells;  // nx * ny

  double dx() const { return -2.0 * xmin / nx; }
  double dy() const { return -2.0 * ymin / ny; }

  static Snapshot from_grid(const UniformGrid& g, uint32_t level, double t,
                            double gamma);
  UniformGrid to_grid(BoundaryMode bc) const;
};

void save_snapshot(const Snapshot& s, const std::string& path);
Snapshot load_snapshot(const std::string& path);

}  // namespace mhdmr
