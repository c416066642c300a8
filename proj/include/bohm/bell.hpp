#ifndef BOHM_BELL_HPP
#define BOHM_BELL_HPP

#include <functional>
#include <vector>

#include "bohm/angles.hpp"
#include "bohm/ensemble.hpp"
#include "bohm/state.hpp"

namespace bohm {

struct PolarizerSetup {
  Vec3 a, b, a_prime, b_prime;
};

void validate(const PolarizerSetup& setup);

/// Quantum polarization correlator
///   C(a,b) = (ax bx + ay by) sin th cos ph + (ay bx - ax by) sin th sin ph - az bz.
double qm_correlator(const PairStateParams& state, const Vec3& a, const Vec3& b);

/// Bohmian correlator by contraction of the estimated normalized tensor:
/// B(a,b) = 3 a^T <M1 M2 / |M1||M2|> b, with the error propagated element-wise.
EstimatorResult bohm_correlator(const CorrelationTensors& tensors, const Vec3& a,
                                const Vec3& b);

/// Direct ensemble route for the same correlator; agrees with the contraction
/// path to rounding when fed the same samples.
EstimatorResult bohm_correlator_direct(const PairStateParams& state, const Vec3& a,
                                       const Vec3& b,
                                       const std::vector<WeightedSample>& samples,
                                       const PhysicalConstants& constants = {});

/// |P(a,b) + P(a,b') + P(a',b) - P(a',b')| for an arbitrary correlator.
double chsh_value(const PolarizerSetup& setup,
                  const std::function<double(const Vec3&, const Vec3&)>& correlator);

/// In-plane polarizer at angle chi (radians): (cos chi, sin chi, 0).
Vec3 planar_polarizer(double chi);

/// The standard maximal-violation setup for the singlet:
/// a = 0 deg, a' = 90 deg, b = 45 deg, b' = 315 deg, all in the xy plane.
PolarizerSetup optimal_singlet_setup();

} // namespace bohm

#endif
