#pragma once

#include <utility>

#include "mhdmr/state.hpp"

namespace mhdmr {

// Exact solution of the decoupled (B_normal, psi) interface problem.
struct GlmInterfaceSolution {
  double bn_m = 0.0;   // resolved normal field at the interface
  double psi_m = 0.0;  // resolved psi at the interface
};

// bn_m  = (bn_L + bn_R)/2 - (psi_R - psi_L)/(2 ch)
// psi_m = (psi_L + psi_R)/2 - ch (bn_R - bn_L)/2
// The interface flux contribution is (psi_m, ch^2 bn_m) for the (B_n, psi) slots.
GlmInterfaceSolution glm_interface(double bn_L, double psi_L, double bn_R,
                                   double psi_R, double ch);

// Five-wave fan: outer fast waves, two rotational waves, entropy wave.
// Normal velocity equals sM and total pressure equals pT_star across all
// four intermediate states.
struct HlldWaveFan {
  double sL = 0.0, sLstar = 0.0, sM = 0.0, sRstar = 0.0, sR = 0.0;
  ConservedState qL_star, qL_2star, qR_2star, qR_star;
  double pT_star = 0.0;
  bool bx_is_zero = false;    // rotational stage skipped, two-state fan
  bool alfven_collapsed = false;  // estimated rotational speeds spilled outside
  bool degenerate_L = false;      // tangential-jump denominator vanished
  bool degenerate_R = false;
};

// Outer signal speed estimates from the fast magnetosonic speeds.
std::pair<double, double> hlld_speeds(const PrimitiveState& wL,
                                      const PrimitiveState& wR, double gamma);

// Builds the full fan. Precondition: qL.Bx == qR.Bx (the caller passes the
// already-resolved interface normal field on both sides).
HlldWaveFan hlld_fan(const ConservedState& qL, const ConservedState& qR,
                     double gamma);

// Full interface flux: HLLD on the seven coupled components, then the
// (B_n, psi) slots overwritten with the decoupled interface contribution.
FluxVector hlld_flux_x(const ConservedState& qL, const ConservedState& qR,
                       double gamma, double ch);

// y-direction solve via the coordinate exchange; qL is the south state.
FluxVector hlld_flux_y(const ConservedState& qL, const ConservedState& qR,
                       double gamma, double ch);

}  // namespace mhdmr
