#pragma once

#include <random>

#include "mhdmr/riemann.hpp"
#include "mhdmr/state.hpp"

// Independent reference implementations used as test oracles. Everything in
// here is deliberately written from scratch against the governing equations,
// not by calling the production code paths it checks.
namespace oracles {

using mhdmr::ConservedState;
using mhdmr::FluxVector;
using mhdmr::PrimitiveState;

// Vector-form flux evaluation, structured differently from the production
// component-by-component code.
FluxVector reference_flux_x(const ConservedState& q, double gamma, double ch);
FluxVector reference_flux_y(const ConservedState& q, double gamma, double ch);

// Flux of a state whose total pressure is prescribed rather than taken from
// the equation of state. The intermediate states of the five-wave fan
// satisfy the jump conditions only under this flux form.
FluxVector pt_form_flux_x(const ConservedState& q, double pT, double ch);

// Interface state of the linear (B_n, psi) system obtained from a numeric
// 2x2 eigen-decomposition with characteristic upwinding.
mhdmr::GlmInterfaceSolution glm_characteristic_solution(double bn_L, double psi_L,
                                                        double bn_R, double psi_R,
                                                        double ch);

// Deterministic admissible-state generator.
class StateGen {
 public:
  explicit StateGen(uint64_t seed) : rng_(seed) {}
  PrimitiveState next_primitive();
  ConservedState next(double gamma);
  // A pair sharing the normal field component, as the fan solver requires.
  std::pair<ConservedState, ConservedState> next_pair(double gamma);

 private:
  std::mt19937_64 rng_;
};

// Exact cell average of x^a y^b over [xl,xr] x [yl,yr].
double monomial_cell_average(int a, int b, double xl, double xr, double yl,
                             double yr);

// max_k |F*(k) - F(k) - S (Q*(k) - Q(k))| / max(1, |F*(k)|, |F(k)|)
double jump_residual(const ConservedState& q, const ConservedState& qs, double S,
                     double pT, double pT_star, double ch);

}  // namespace oracles
