#ifndef BOHM_DYNAMICS_HPP
#define BOHM_DYNAMICS_HPP

#include <vector>

#include "bohm/angles.hpp"
#include "bohm/momenta.hpp"
#include "bohm/state.hpp"

namespace bohm {

/// Time derivatives of the six hidden variables:
///   I da/dt = S_a
///   I db/dt = (S_b - cos a S_g) / sin^2 a
///   I dg/dt = (S_g - cos a S_b) / sin^2 a
/// per rotor, with the six-dimensional phase S of the guiding wave.
struct SixVelocity {
  double d_alpha1, d_beta1, d_gamma1;
  double d_alpha2, d_beta2, d_gamma2;
};

SixVelocity velocity_field(const PairStateParams& state, const PairConfiguration& cfg,
                           const PhysicalConstants& constants = {});

struct IntegratorSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 1.0;
  double t_end = 10.0; // may be negative: integrate backwards
};

void validate(const IntegratorSpec& spec);

struct TrajectoryPoint {
  double t;
  PairConfiguration cfg; // angles as integrated (beta, gamma unwrapped)
  ConfigurationReport report;
};

/// Adaptive Dormand-Prince 5(4) with dense output on a uniform time grid of
/// spacing |dt_output|.  Steps that would land inside the pole or node guard
/// bands are rejected and halved; a step that underflows ends the trajectory
/// with StepUnderflowError.
std::vector<TrajectoryPoint> integrate(const PairStateParams& state,
                                       const PairConfiguration& start,
                                       const IntegratorSpec& spec, double dt_output,
                                       const PhysicalConstants& constants = {});

/// Exact single-rotor orbit for the spin-up state:
///   lambda(t) = {a0, b0 - t/tau, g0 - t/tau},  tau = 4 I cos^2(a0/2);
/// the spin-down rotor precesses the other way with tau = 4 I sin^2(a0/2):
///   lambda(t) = {a0, b0 + t/tau, g0 - t/tau}.
/// Returned angles are canonicalized.
EulerTriple exact_single_rotor(const EulerTriple& start, double t, bool spin_down = false,
                               double inertia = 1.0);

} // namespace bohm

#endif
