#ifndef BOHM_STATE_HPP
#define BOHM_STATE_HPP

#include <cmath>

#include "bohm/angles.hpp"
#include "bohm/errors.hpp"

namespace bohm {

/// Quantum parameters of the pair state
///   |Psi> = cos(theta/2) |ud> + e^{i phi} sin(theta/2) |du>.
struct PairStateParams {
  double theta = 0.5 * kPi; ///< entanglement angle, [0, pi]
  double phi = 0.0;         ///< relative phase, [0, 2pi)
};

inline void validate(const PairStateParams& s) {
  if (!std::isfinite(s.theta) || !std::isfinite(s.phi))
    throw DomainError("PairStateParams: non-finite parameter");
  if (s.theta < 0.0 || s.theta > kPi)
    throw DomainError("PairStateParams: theta outside [0, pi]");
  if (s.phi < 0.0 || s.phi >= kTwoPi)
    throw DomainError("PairStateParams: phi outside [0, 2pi)");
}

/// Units and fixed quantum numbers.  hbar = 1 throughout; the spin and axis
/// projection quantum numbers are pinned to 1/2, so the total energy of the
/// stationary pair state is E = s(s+1)/I = 3/(4 I).
struct PhysicalConstants {
  double inertia = 1.0;

  static constexpr double hbar = 1.0;
  static constexpr double spin = 0.5;
  static constexpr double axis_projection = 0.5;

  double total_energy() const { return spin * (spin + 1.0) / inertia; }
};

inline void validate(const PhysicalConstants& c) {
  if (!(c.inertia > 0.0) || !std::isfinite(c.inertia))
    throw DomainError("PhysicalConstants: moment of inertia must be positive and finite");
}

// Numerical guards, shared by the whole library.
//
// Node threshold: configurations with R^2 below this value have no usable phase;
// expressed on the dimensionless bracket |W|^2 = (8 pi^2)^2 R^2 it is 1e-28.
inline constexpr double kNodeThresholdW2 = 1e-28;
// Pole threshold for samplers and point evaluation: |sin alpha| below this
// rejects the configuration (cot alpha / 1/sin alpha overflow).
inline constexpr double kPoleThresholdSinAlpha = 1e-8;
// Wider guard band used by the trajectory integrator for step rejection.
inline constexpr double kTrajectoryPoleGuard = 1e-6;
inline constexpr double kTrajectoryNodeGuardW2 = 1e-18;

} // namespace bohm

#endif
