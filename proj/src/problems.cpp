#include "mhdmr/problems.hpp"

#include <cmath>

namespace mhdmr {

RiemannQuadrants riemann2d_quadrants() {
  auto mk = [](double rho, double mux, double muy, double muz, double E,
               double Bx, double By, double Bz) {
    ConservedState q;
    q.rho = rho;
    q.mx = mux;
    q.my = muy;
    q.mz = muz;
    q.E = E;
    q.Bx = Bx;
    q.By = By;
    q.Bz = Bz;
    q.psi = 0.0;
    return q;
  };
  RiemannQuadrants r;
  // x > 0, y < 0
  r.q[1][0] = mk(1.0304, 1.5774, -1.0455, -0.1016, 5.7813, 0.3501, 0.5078, 0.1576);
  // x > 0, y > 0
  r.q[1][1] = mk(0.9308, 1.4557, -0.4633, 0.0575, 5.0838, 0.3501, 0.9830, 0.3050);
  // x < 0, y < 0
  r.q[0][0] = mk(1.0000, 1.7500, -1.0000, 0.0000, 6.0000, 0.5642, 0.5078, 0.2539);
  // x < 0, y > 0
  r.q[0][1] = mk(1.8887, 0.2334, -1.7422, 0.0733, 12.999, 0.5642, 0.9830, 0.4915);
  return r;
}

InitialCondition problem_ic(const std::string& problem) {
  if (problem == "riemann2d") {
    const RiemannQuadrants r = riemann2d_quadrants();
    return [r](double x, double y) { return r.q[x > 0.0][y > 0.0]; };
  }
  if (problem == "uniform") {
    PrimitiveState w;
    w.rho = 1.0;
    w.p = 1.0;
    w.ux = 0.5;
    w.uy = -0.25;
    w.uz = 0.1;
    w.Bx = 0.4;
    w.By = 0.3;
    w.Bz = 0.2;
    w.psi = 0.0;
    const ConservedState q = to_conserved(w, 5.0 / 3.0);
    return [q](double, double) { return q; };
  }
  if (problem == "psi-gauss") {
    return [](double x, double y) {
      PrimitiveState w;
      w.rho = 1.0;
      w.p = 1.0;
      w.Bx = 0.5;
      w.By = 0.5;
      w.Bz = 0.0;
      w.psi = 0.5 * std::exp(-(x * x + y * y) / 0.05);
      return to_conserved(w, 5.0 / 3.0);
    };
  }
  fail("DomainMismatch", "unknown problem '" + problem + "'");
}

namespace {

void require_canonical_domain(double x0, double y0, double w, double h) {
  if (x0 != -1.0 || y0 != -1.0 || w != 2.0 || h != 2.0) {
    fail("DomainMismatch", "problems are defined on [-1,1]x[-1,1]");
  }
}

}  // namespace

void init_grid(UniformGrid& g, const std::string& problem) {
  require_canonical_domain(g.x0, g.y0, g.nx * g.dx, g.ny * g.dy);
  const InitialCondition ic = problem_ic(problem);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      g.at(i, j) = ic(g.xc(i), g.yc(j));
    }
  }
  apply_boundary(g);
}

void init_mesh(QuadtreeMesh& mesh, const std::string& problem,
               const ThresholdPolicy& pol) {
  require_canonical_domain(mesh.x0(), mesh.y0(), mesh.width(), mesh.height());
  mesh.init_adapted(problem_ic(problem), pol);
}

}  // namespace mhdmr
