#include <doctest.h>

#include <cmath>
#include <vector>

#include "mhdmr/diagnostics.hpp"
#include "mhdmr/problems.hpp"
#include "mhdmr/qtree.hpp"
#include "oracles.hpp"

using namespace mhdmr;

namespace {
constexpr double kGamma = 5.0 / 3.0;

// Full tree with leaf values equal to exact monomial cell averages; internal
// values become exact averages too because projection is exact.
QuadtreeMesh monomial_mesh(int L, int a, int b) {
  QuadtreeMesh mesh(L, BoundaryMode::Neumann);
  mesh.init_full([&](double, double) {
    ConservedState q;
    q.rho = 1.0;
    q.E = 1.0;
    return q;
  });
  for (int l = 0; l <= L; ++l) {
    const long n = 1L << l;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) {
        TreeNode* t = mesh.find(l, i, j);
        const double xl = -1.0 + 2.0 * double(i) / n;
        const double xr = -1.0 + 2.0 * double(i + 1) / n;
        const double yl = -1.0 + 2.0 * double(j) / n;
        const double yr = -1.0 + 2.0 * double(j + 1) / n;
        ConservedState q;
        q.rho = oracles::monomial_cell_average(a, b, xl, xr, yl, yr);
        q.E = 1.0;
        t->q = q;
      }
    }
  }
  return mesh;
}

ThresholdPolicy harten_policy(int L, double eps0) {
  ThresholdPolicy pol;
  pol.mode = ThresholdPolicy::Mode::Harten;
  pol.epsilon0 = eps0;
  pol.domain_area = 4.0;
  pol.max_level = L;
  return pol;
}

ThresholdPolicy constant_policy(int L, double eps) {
  ThresholdPolicy pol;
  pol.mode = ThresholdPolicy::Mode::Constant;
  pol.epsilon = eps;
  pol.max_level = L;
  return pol;
}
}  // namespace

TEST_CASE("level thresholds") {
  ThresholdPolicy pol = harten_policy(10, 0.05);
  CHECK(pol.level_threshold(9) == doctest::Approx(0.0125).epsilon(1e-15));
  CHECK(pol.level_threshold(8) == doctest::Approx(0.003125).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(pol.level_threshold(10), doctest::Contains("LevelOutOfRange"),
                       Error);
  CHECK_THROWS_AS(pol.level_threshold(-1), Error);
  for (int l = 1; l <= 9; ++l) {
    CHECK(pol.level_threshold(l) > pol.level_threshold(l - 1));
  }
  ThresholdPolicy c = constant_policy(10, 0.005);
  for (int l = 0; l <= 9; ++l) {
    CHECK(c.level_threshold(l) == 0.005);
  }
}

TEST_CASE("projection of four children") {
  QuadtreeMesh mesh(2, BoundaryMode::Neumann);
  mesh.init_full([](double, double) {
    ConservedState q;
    q.rho = 1.0;
    q.E = 1.0;
    return q;
  });
  CHECK(mesh.project(1, 0, 0).rho == 1.0);
  mesh.find(2, 0, 0)->q.rho = 1.0;
  mesh.find(2, 1, 0)->q.rho = 2.0;
  mesh.find(2, 0, 1)->q.rho = 3.0;
  mesh.find(2, 1, 1)->q.rho = 4.0;
  CHECK(mesh.project(1, 0, 0).rho == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("prediction reproduces constants and conserves the parent mean") {
  QuadtreeMesh cmesh(2, BoundaryMode::Neumann);
  ConservedState c;
  c.rho = 0.8;
  c.E = 2.0;
  c.psi = -0.3;
  cmesh.init_full([&](double, double) { return c; });
  const std::array<ConservedState, 4> kids = cmesh.predict_children(1, 1, 1);
  for (const ConservedState& k : kids) {
    CHECK(k.rho == 0.8);
    CHECK(k.psi == -0.3);
  }

  QuadtreeMesh mesh(3, BoundaryMode::Neumann);
  oracles::StateGen gen(11);
  mesh.init_full([&](double, double) { return gen.next(kGamma); });
  mesh.project_up();
  for (long j = 0; j < 4; ++j) {
    for (long i = 0; i < 4; ++i) {
      const std::array<ConservedState, 4> pc = mesh.predict_children(2, i, j);
      const ConservedState parent = mesh.value(2, i, j);
      for (int k = 0; k < kNcomp; ++k) {
        const double mean = 0.25 * ((pc[0].comp(k) + pc[1].comp(k)) +
                                    (pc[2].comp(k) + pc[3].comp(k)));
        REQUIRE(std::abs(mean - parent.comp(k)) <=
                1e-14 * std::max(1.0, std::abs(parent.comp(k))));
      }
    }
  }
}

TEST_CASE("prediction is exact for linear fields") {
  QuadtreeMesh mesh = monomial_mesh(4, 1, 0);  // f = x
  for (int l = 1; l <= 4; ++l) {
    const long n = 1L << l;
    for (long j = 2; j + 2 < n; ++j) {
      for (long i = 2; i + 2 < n; ++i) {
        const ConservedState pred = mesh.predict_at(l, i, j);
        const ConservedState actual = mesh.value(l, i, j);
        REQUIRE(std::abs(pred.rho - actual.rho) <= 1e-14);
      }
    }
  }
}

TEST_CASE("details vanish on quadratics over interior stencils") {
  const int L = 5;
  const std::vector<std::pair<int, int>> monomials = {{0, 0}, {1, 0}, {0, 1},
                                                      {2, 0}, {1, 1}, {0, 2}};
  for (const auto& [a, b] : monomials) {
    QuadtreeMesh mesh = monomial_mesh(L, a, b);
    for (int l = 0; l < L; ++l) {
      const long n = 1L << l;
      for (long j = 2; j + 2 < n; ++j) {
        for (long i = 2; i + 2 < n; ++i) {
          const auto d = mesh.details_of(l, i, j);
          for (int c = 0; c < 4; ++c) {
            REQUIRE(std::abs(d[c][0]) <= 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("details are local to a step") {
  const int L = 4;
  QuadtreeMesh mesh(L, BoundaryMode::Neumann);
  mesh.init_full([](double x, double) {
    ConservedState q;
    q.rho = x < 0.31 ? 1.0 : 2.0;  // step away from dyadic boundaries
    q.E = 1.0;
    return q;
  });
  mesh.project_up();
  const auto far = mesh.details_of(L - 1, 0, 0);
  CHECK(std::abs(far[0][0]) <= 1e-13);
  double near_max = 0.0;
  const long n = 1L << (L - 1);
  for (long j = 0; j < n; ++j) {
    for (long i = 0; i < n; ++i) {
      const auto d = mesh.details_of(L - 1, i, j);
      for (int c = 0; c < 4; ++c) near_max = std::max(near_max, std::abs(d[c][0]));
    }
  }
  CHECK(near_max > 0.05);
}

TEST_CASE("child details satisfy the conservation constraint") {
  QuadtreeMesh mesh(3, BoundaryMode::Neumann);
  oracles::StateGen gen(19);
  mesh.init_full([&](double, double) { return gen.next(kGamma); });
  mesh.project_up();
  const auto d = mesh.details_of(2, 1, 2);
  for (int k = 0; k < kNcomp; ++k) {
    const double sum = (d[0][k] + d[1][k]) + (d[2][k] + d[3][k]);
    REQUIRE(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("constant field coarsens to the root") {
  QuadtreeMesh mesh(6, BoundaryMode::Neumann);
  ConservedState c;
  c.rho = 1.0;
  c.E = 1.0;
  mesh.init_adapted([&](double, double) { return c; }, constant_policy(6, 0.005));
  CHECK(mesh.leaf_count() == 1);
  CHECK(mesh.finest_leaf_level() == 0);
  CHECK(mesh.audit_families());
  CHECK(mesh.audit_graded());
}

TEST_CASE("a single significant cell keeps its graded cone") {
  const int L = 4;
  QuadtreeMesh mesh(L, BoundaryMode::Neumann);
  mesh.init_full([&](double x, double y) {
    ConservedState q;
    q.rho = 1.0;
    q.E = 1.0;
    const double h = 2.0 / (1 << L);
    if (x > -h && x < 0.0 && y > -h && y < 0.0) q.rho = 2.0;
    return q;
  });
  const ThresholdPolicy pol = constant_policy(L, 0.01);
  mesh.compute_details();
  mesh.coarsen(pol);
  CHECK(mesh.audit_families());
  CHECK(mesh.audit_graded());
  CHECK(mesh.finest_leaf_level() == L);
  const long n = 1L << L;
  const TreeNode* bump = mesh.find(L, n / 2 - 1, n / 2 - 1);
  REQUIRE(bump != nullptr);
  CHECK(bump->kind == NodeKind::Leaf);
  CHECK(bump->q.rho == 2.0);
  CHECK(mesh.find(L, 0, 0) == nullptr);
  CHECK(mesh.leaf_count() < (1L << (2 * L)) / 2);
  // fixed point: re-running coarsening changes nothing
  mesh.compute_details();
  const long before = mesh.leaf_count();
  mesh.coarsen(pol);
  CHECK(mesh.leaf_count() == before);
}

TEST_CASE("smooth field leaves the extended mesh unchanged") {
  const int L = 5;
  QuadtreeMesh mesh(L, BoundaryMode::Neumann);
  mesh.init_full([](double x, double y) {
    ConservedState q;
    q.rho = 1.0 + 1e-4 * std::sin(M_PI * x) * std::cos(M_PI * y);
    q.E = 1.0;
    return q;
  });
  const ThresholdPolicy pol = constant_policy(L, 0.01);
  mesh.compute_details();
  mesh.coarsen(pol);
  const long adapted = mesh.leaf_count();
  mesh.compute_details();
  mesh.refine_for_evolution(pol);
  CHECK(mesh.leaf_count() == adapted);
}

TEST_CASE("refinement never exceeds the maximum level") {
  const int L = 3;
  QuadtreeMesh mesh(L, BoundaryMode::Neumann);
  mesh.init_full([](double x, double y) {
    ConservedState q;
    q.rho = (x < 0.1 ? 1.0 : 3.0) + (y < -0.2 ? 0.5 : 0.0);
    q.E = 10.0;
    return q;
  });
  const ThresholdPolicy pol = constant_policy(L, 1e-6);
  mesh.compute_details();
  mesh.refine_for_evolution(pol);
  CHECK(mesh.finest_leaf_level() == L);
  CHECK(mesh.audit_families());
  CHECK(mesh.audit_graded());
  CHECK_THROWS_WITH_AS(mesh.split_cell(L, 0, 0), doctest::Contains("MaxLevelReached"),
                       Error);
}

TEST_CASE("virtual leaves appear only beside level jumps") {
  QuadtreeMesh flat(3, BoundaryMode::Neumann);
  oracles::StateGen gen(3);
  flat.init_full([&](double, double) { return gen.next(kGamma); });
  flat.install_virtual_leaves();
  CHECK(flat.virtual_count() == 0);

  QuadtreeMesh mesh(2, BoundaryMode::Neumann);
  ConservedState c;
  c.rho = 1.0;
  c.E = 1.0;
  mesh.init_full([&](double, double) { return c; });
  mesh.compute_details();
  mesh.coarsen(constant_policy(2, 0.1));
  REQUIRE(mesh.leaf_count() == 1);
  mesh.split_cell(0, 0, 0);
  mesh.split_cell(1, 1, 1);  // north-east cell refined to level 2
  REQUIRE(mesh.audit_graded());
  mesh.install_virtual_leaves();
  // one level-jump face on the west and one on the south, two cells each
  CHECK(mesh.virtual_count() == 4);
  REQUIRE(mesh.find(2, 1, 2) != nullptr);
  REQUIRE(mesh.find(2, 1, 3) != nullptr);
  REQUIRE(mesh.find(2, 2, 1) != nullptr);
  REQUIRE(mesh.find(2, 3, 1) != nullptr);
  CHECK(mesh.find(2, 1, 2)->kind == NodeKind::Virtual);

  mesh.project_up();
  mesh.fill_virtual();
  CHECK(mesh.find(2, 1, 2)->q.rho == 1.0);

  mesh.clear_virtual();
  CHECK(mesh.virtual_count() == 0);
}

TEST_CASE("virtual cells are never time-evolved") {
  QuadtreeMesh mesh(5, BoundaryMode::Neumann);
  init_mesh(mesh, "riemann2d", harten_policy(5, 0.01));
  mesh.compute_details();
  mesh.refine_for_evolution(harten_policy(5, 0.01));
  mesh.install_virtual_leaves();
  mesh.project_up();
  mesh.fill_virtual();
  const std::vector<CellRef> virt = mesh.collect(NodeKind::Virtual);
  REQUIRE(!virt.empty());
  std::vector<double> before;
  for (const CellRef& v : virt) before.push_back(mesh.find(v.l, v.i, v.j)->q.rho);
  mesh.sweep_x(kGamma, 3.0, 1e-4);
  for (size_t k = 0; k < virt.size(); ++k) {
    REQUIRE(mesh.find(virt[k].l, virt[k].i, virt[k].j)->q.rho == before[k]);
  }
}

TEST_CASE("adapted riemann mesh keeps its audits green over steps") {
  QuadtreeMesh mesh(4, BoundaryMode::Neumann);
  const ThresholdPolicy pol = harten_policy(4, 0.01);
  init_mesh(mesh, "riemann2d", pol);
  CHECK(mesh.audit_families());
  CHECK(mesh.audit_graded());
  TimeController tc;
  tc.c_cfl = 0.3;
  tc.t_end = 5e-3;
  GlmParams par;
  par.gamma = kGamma;
  while (tc.t < tc.t_end) {
    mr_step(mesh, tc, par, pol, true);
    REQUIRE(mesh.audit_families());
    REQUIRE(mesh.audit_graded());
    REQUIRE(mesh.virtual_count() == 0);
  }
}

TEST_CASE("keep-all run matches the uniform engine bit for bit") {
  const int L = 4;
  const double t_end = 5e-3;
  const ThresholdPolicy pol = constant_policy(L, 0.0);  // eps = 0: keep all

  QuadtreeMesh mesh(L, BoundaryMode::Neumann);
  init_mesh(mesh, "riemann2d", pol);
  CHECK(mesh.leaf_count() == (1L << L) * (1L << L));

  UniformGrid grid = UniformGrid::square(L, BoundaryMode::Neumann);
  init_grid(grid, "riemann2d");

  TimeController tca, tcb;
  tca.c_cfl = tcb.c_cfl = 0.3;
  tca.t_end = tcb.t_end = t_end;
  GlmParams par;
  par.gamma = kGamma;
  while (tca.t < t_end) {
    mr_step(mesh, tca, par, pol, true);
    fv_step(grid, tcb, par, true);
    REQUIRE(tca.t == tcb.t);
  }
  const UniformGrid synth = mesh.synthesize(L);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      for (int k = 0; k < kNcomp; ++k) {
        REQUIRE(synth.at(i, j).comp(k) == grid.at(i, j).comp(k));
      }
    }
  }
}

TEST_CASE("level-jump fluxes conserve the periodic budgets") {
  const int L = 4;
  const ThresholdPolicy pol = harten_policy(L, 0.01);
  QuadtreeMesh mesh(L, BoundaryMode::Periodic);
  init_mesh(mesh, "riemann2d", pol);
  REQUIRE(mesh.leaf_count() < (1L << L) * (1L << L));
  TimeController tc;
  tc.c_cfl = 0.3;
  tc.t_end = 1.0;
  GlmParams par;
  par.gamma = kGamma;
  std::array<double, kNcomp> before = budget_totals(mesh);
  for (int s = 0; s < 5; ++s) {
    mr_step(mesh, tc, par, pol, true);
    const std::array<double, kNcomp> after = budget_totals(mesh);
    for (int k = 0; k < 8; ++k) {  // psi is damped, not conserved
      const double scale = std::max({1.0, std::abs(before[k]), std::abs(after[k])});
      REQUIRE(std::abs(after[k] - before[k]) <= 1e-12 * scale);
    }
    before = after;
  }
}

TEST_CASE("compression ratio bookkeeping") {
  CHECK(compression_ratio({16, 16, 16}, 2) == doctest::Approx(100.0));
  CHECK(compression_ratio({8, 8}, 2) == doctest::Approx(50.0));
  CHECK_THROWS_WITH_AS(compression_ratio({}, 3), doctest::Contains("EmptyHistory"),
                       Error);
}

TEST_CASE("synthesis is piecewise constant and level-checked") {
  QuadtreeMesh mesh(3, BoundaryMode::Neumann);
  ConservedState c;
  c.rho = 2.0;
  c.E = 1.5;
  mesh.init_adapted([&](double, double) { return c; }, constant_policy(3, 0.1));
  REQUIRE(mesh.leaf_count() == 1);
  const UniformGrid g = mesh.synthesize(2);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      REQUIRE(g.at(i, j).rho == 2.0);
    }
  }
}

TEST_CASE("projection requires a full family") {
  QuadtreeMesh mesh(2, BoundaryMode::Neumann);
  ConservedState c;
  c.rho = 1.0;
  c.E = 1.0;
  mesh.init_adapted([&](double, double) { return c; }, constant_policy(2, 0.1));
  REQUIRE(mesh.leaf_count() == 1);
  CHECK_THROWS_WITH_AS((void)mesh.project(0, 0, 0), doctest::Contains("MissingChild"),
                       Error);
}
