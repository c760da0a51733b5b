#include <doctest.h>

#include <cmath>

#include "mhdmr/problems.hpp"
#include "mhdmr/state.hpp"
#include "oracles.hpp"

using namespace mhdmr;

namespace {
constexpr double kGamma = 5.0 / 3.0;
}

TEST_CASE("to_primitive on the quadrant data") {
  const RiemannQuadrants r = riemann2d_quadrants();
  const ConservedState q = r.q[0][0];  // x<0, y<0
  const PrimitiveState w = to_primitive(q, kGamma);
  // independent arithmetic: p = (g-1)(E - |m|^2/(2 rho) - |B|^2/2)
  const double m2 = q.mx * q.mx + q.my * q.my + q.mz * q.mz;
  const double b2 = q.Bx * q.Bx + q.By * q.By + q.Bz * q.Bz;
  const double expected = (kGamma - 1.0) * (q.E - m2 / (2.0 * q.rho) - b2 / 2.0);
  CHECK(w.p == doctest::Approx(expected).epsilon(1e-14));
  CHECK(w.p == doctest::Approx(2.43228).epsilon(1e-5));
  CHECK(w.ux == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("to_primitive trivial state") {
  ConservedState q;
  q.rho = 1.0;
  q.E = 1.0;
  const PrimitiveState w = to_primitive(q, kGamma);
  CHECK(w.p == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("to_conserved examples") {
  PrimitiveState w;
  w.rho = 1.0;
  w.p = 2.0 / 3.0;
  CHECK(to_conserved(w, kGamma).E == doctest::Approx(1.0).epsilon(1e-15));

  PrimitiveState v;
  v.rho = 2.0;
  v.p = 1.0;
  v.ux = 1.0;
  v.By = 1.0;
  CHECK(to_conserved(v, kGamma).E == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("quadrant states round-trip") {
  const RiemannQuadrants r = riemann2d_quadrants();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const ConservedState q = r.q[a][b];
      const ConservedState rt = to_conserved(to_primitive(q, kGamma), kGamma);
      for (int k = 0; k < kNcomp; ++k) {
        const double scale = std::max(1.0, std::abs(q.comp(k)));
        CHECK(std::abs(rt.comp(k) - q.comp(k)) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("conserved<->primitive round-trip property") {
  oracles::StateGen gen(2024);
  for (int n = 0; n < 10000; ++n) {
    const ConservedState q = gen.next(kGamma);
    const ConservedState rt = to_conserved(to_primitive(q, kGamma), kGamma);
    for (int k = 0; k < kNcomp; ++k) {
      const double scale = std::max(1.0, std::abs(q.comp(k)));
      REQUIRE(std::abs(rt.comp(k) - q.comp(k)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("pressure floor and failures") {
  reset_pressure_floor_events();
  ConservedState q;
  q.rho = 1.0;
  q.mx = 1.0;
  q.E = 0.5 - 1e-13;  // p = (2/3)(E - 0.5) inside the floor band
  const PrimitiveState w = to_primitive(q, kGamma);
  CHECK(w.p == 1e-12);
  CHECK(pressure_floor_events() == 1);

  q.E = 0.4;  // strongly negative pressure
  CHECK_THROWS_WITH_AS(to_primitive(q, kGamma), doctest::Contains("NonPositivePressure"),
                       Error);
  q.rho = -1.0;
  CHECK_THROWS_WITH_AS(to_primitive(q, kGamma), doctest::Contains("NonPositiveDensity"),
                       Error);

  PrimitiveState bad;
  bad.rho = 1.0;
  bad.p = -1.0;
  CHECK_THROWS_AS(to_conserved(bad, kGamma), Error);
}

TEST_CASE("x-flux of a uniform rest state") {
  PrimitiveState w;
  w.rho = 1.0;
  w.p = 1.0;
  const ConservedState q = to_conserved(w, kGamma);
  const FluxVector f = physical_flux_x(q, kGamma, 1.0);
  CHECK(f.rho == 0.0);
  CHECK(f.E == 0.0);
  CHECK(f.mx == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.my == 0.0);
  CHECK(f.mz == 0.0);
  CHECK(f.Bx == 0.0);
  CHECK(f.By == 0.0);
  CHECK(f.Bz == 0.0);
  CHECK(f.psi == 0.0);
}

TEST_CASE("cleaning slots of the x-flux") {
  PrimitiveState w;
  w.rho = 1.0;
  w.p = 1.0;
  w.Bx = 0.5;
  w.psi = 1.0;
  const ConservedState q = to_conserved(w, kGamma);
  const FluxVector f = physical_flux_x(q, kGamma, 2.0);
  CHECK(f.Bx == 1.0);   // psi in the B_x slot
  CHECK(f.psi == 2.0);  // ch^2 B_x
}

TEST_CASE("fluxes match the independent oracle") {
  oracles::StateGen gen(7);
  for (int n = 0; n < 10000; ++n) {
    const ConservedState q = gen.next(kGamma);
    const FluxVector fx = physical_flux_x(q, kGamma, 1.7);
    const FluxVector gx = oracles::reference_flux_x(q, kGamma, 1.7);
    const FluxVector fy = physical_flux_y(q, kGamma, 1.7);
    const FluxVector gy = oracles::reference_flux_y(q, kGamma, 1.7);
    for (int k = 0; k < kNcomp; ++k) {
      const double sx = std::max(1.0, std::abs(gx.comp(k)));
      const double sy = std::max(1.0, std::abs(gy.comp(k)));
      REQUIRE(std::abs(fx.comp(k) - gx.comp(k)) <= 1e-14 * sx);
      REQUIRE(std::abs(fy.comp(k) - gy.comp(k)) <= 1e-14 * sy);
    }
  }
  const RiemannQuadrants r = riemann2d_quadrants();
  const FluxVector f = physical_flux_x(r.q[0][0], kGamma, 1.0);
  const FluxVector g = oracles::reference_flux_x(r.q[0][0], kGamma, 1.0);
  for (int k = 0; k < kNcomp; ++k) {
    REQUIRE(std::abs(f.comp(k) - g.comp(k)) <=
            1e-14 * std::max(1.0, std::abs(g.comp(k))));
  }
}

TEST_CASE("y-flux equals the coordinate-swapped x-flux") {
  oracles::StateGen gen(99);
  for (int n = 0; n < 10000; ++n) {
    const ConservedState q = gen.next(kGamma);
    const FluxVector fy = physical_flux_y(q, kGamma, 1.3);
    const FluxVector swapped = swap_xy(physical_flux_x(swap_xy(q), kGamma, 1.3));
    for (int k = 0; k < kNcomp; ++k) {
      REQUIRE(fy.comp(k) == swapped.comp(k));
    }
  }
}

TEST_CASE("x-flux reduces to Euler plus magnetic pressure in the 1D limit") {
  PrimitiveState w;
  w.rho = 1.4;
  w.p = 0.8;
  w.ux = 0.6;
  w.Bx = 0.5;
  const ConservedState q = to_conserved(w, kGamma);
  const FluxVector f = physical_flux_x(q, kGamma, 1.0);
  const double pT = w.p + 0.5 * w.Bx * w.Bx;
  CHECK(f.rho == doctest::Approx(w.rho * w.ux).epsilon(1e-15));
  CHECK(f.mx == doctest::Approx(w.rho * w.ux * w.ux + pT - w.Bx * w.Bx).epsilon(1e-15));
  CHECK(f.E == doctest::Approx((q.E + pT) * w.ux - w.ux * w.Bx * w.Bx).epsilon(1e-14));
  CHECK(f.my == 0.0);
  CHECK(f.mz == 0.0);
  CHECK(f.By == 0.0);
  CHECK(f.Bz == 0.0);
}

TEST_CASE("fast speed limits") {
  PrimitiveState w;
  w.rho = 1.0;
  w.p = 1.0;
  CHECK(fast_speed(w, 0.0, kGamma) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));
  w.By = 1.0;
  CHECK(fast_speed(w, 0.0, kGamma) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("fast speed dominates sound and normal Alfven speeds") {
  oracles::StateGen gen(41);
  for (int n = 0; n < 10000; ++n) {
    const PrimitiveState w = to_primitive(gen.next(kGamma), kGamma);
    const double cf = fast_speed(w, w.Bx, kGamma);
    const double sound = std::sqrt(kGamma * w.p / w.rho);
    const double alfven = std::abs(w.Bx) / std::sqrt(w.rho);
    REQUIRE(cf >= sound * (1.0 - 1e-13));
    REQUIRE(cf >= alfven * (1.0 - 1e-13));
  }
}

TEST_CASE("fast speed is non-increasing in the normal component") {
  PrimitiveState w;
  w.rho = 1.3;
  w.p = 0.7;
  w.Bx = 0.0;
  w.By = 1.1;
  w.Bz = -0.4;
  const double btot = std::sqrt(w.Bx * w.Bx + w.By * w.By + w.Bz * w.Bz);
  double prev = fast_speed(w, 0.0, kGamma);
  for (int s = 1; s <= 40; ++s) {
    const double bn = btot * s / 40.0;
    const double cf = fast_speed(w, bn, kGamma);
    REQUIRE(cf <= prev * (1.0 + 1e-13));
    prev = cf;
  }
}

TEST_CASE("cleaning speed law") {
  CHECK(compute_ch(0.01, 0.01, 0.001, 0.3) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(compute_ch(0.02, 0.01, 0.001, 0.3) == compute_ch(0.01, 0.01, 0.001, 0.3));
  const double s = 1.7;
  const double dt = 0.3 * 0.01 / s;
  CHECK(compute_ch(0.01, 0.02, dt, 0.3) == doctest::Approx(s).epsilon(1e-14));
  CHECK_THROWS_WITH_AS(compute_ch(0.01, 0.01, 0.0, 0.3), doctest::Contains("ZeroTimeStep"),
                       Error);
}
