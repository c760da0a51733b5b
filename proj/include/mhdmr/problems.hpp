#pragma once

#include <functional>
#include <string>

#include "mhdmr/grid.hpp"
#include "mhdmr/qtree.hpp"

namespace mhdmr {

// Four constant states keyed by quadrant sign, psi zero everywhere.
struct RiemannQuadrants {
  ConservedState q[2][2];  // [x > 0][y > 0]
};

// The 2D Riemann initial condition used throughout the experiments.
RiemannQuadrants riemann2d_quadrants();

// Pointwise initial data; each cell takes the value at its center.
using InitialCondition = std::function<ConservedState(double, double)>;

// Problems: "riemann2d" (quadrant data on [-1,1]^2), "uniform" (moving
// constant state), "psi-gauss" (uniform flow with a Gaussian psi bump).
InitialCondition problem_ic(const std::string& problem);

// DomainMismatch unless the target covers [-1,1]^2.
void init_grid(UniformGrid& g, const std::string& problem);
void init_mesh(QuadtreeMesh& mesh, const std::string& problem,
               const ThresholdPolicy& pol);

}  // namespace mhdmr
