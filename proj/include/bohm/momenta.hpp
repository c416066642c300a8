#ifndef BOHM_MOMENTA_HPP
#define BOHM_MOMENTA_HPP

#include <cmath>

#include "bohm/angles.hpp"
#include "bohm/state.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

struct MomentumPair {
  Vec3 m1, m2;
};

/// Relative geometry of the two momentum vectors.  The azimuth convention is
/// M = |M| (sin th sin ph, sin th cos ph, cos th); only the difference
/// ph_rel = ph2 - ph1 is ever reported, so the reference direction drops out.
struct RelativeAngles {
  double cos_big_phi; // angle between M1 and M2
  double cos_az;      // cos(ph2 - ph1)
  double sin_az;      // sin(ph2 - ph1)
};

/// Everything the estimators consume about one configuration.
struct ConfigurationReport {
  MomentumPair momenta;
  double len1, len2;
  double mxy1, mxy2;
  double cos_big_phi;
  double cos_az, sin_az;
  double kinetic; // (|M1|^2 + |M2|^2) / (2 I)
  double qpot;    // E - kinetic, with E = 3/(4I)
  double density; // R^2(lambda)
};

/// Body-fixed symmetry axis; e . M = 1/2 identically for the states handled here.
inline Vec3 principal_axis(const EulerTriple& t) {
  const double sa = std::sin(t.alpha);
  return {sa * std::sin(t.beta), sa * std::cos(t.beta), std::cos(t.alpha)};
}

/// Angular momentum of one rotor from its phase partials:
///   Mx = -cos b S_a + sin b cot a S_b - (sin b / sin a) S_g
///   My =  sin b S_a + cos b cot a S_b - (cos b / sin a) S_g
///   Mz = -S_b
inline Vec3 momentum_from_trig(const RotorTrig& r, double s_alpha, double s_beta,
                               double s_gamma) {
  const double inv_sa = 1.0 / r.sin_alpha;
  const double planar = (r.cos_alpha * s_beta - s_gamma) * inv_sa;
  return {-r.cos_beta * s_alpha + r.sin_beta * planar,
          r.sin_beta * s_alpha + r.cos_beta * planar,
          -s_beta};
}

inline Vec3 momentum_from_gradient(const EulerTriple& t, double s_alpha, double s_beta,
                                   double s_gamma) {
  const RotorTrig r = RotorTrig::from(t);
  if (std::fabs(r.sin_alpha) < kPoleThresholdSinAlpha)
    throw PoleError("momentum_from_gradient: |sin alpha| below pole threshold");
  return momentum_from_trig(r, s_alpha, s_beta, s_gamma);
}

/// Both Bohmian momentum vectors at one configuration.
inline MomentumPair momentum_pair(const PairStateParams& st, const PairConfiguration& cfg) {
  const StateCoeffs k = StateCoeffs::from(st);
  const RotorTrig r1 = RotorTrig::from(cfg.rotor1);
  const RotorTrig r2 = RotorTrig::from(cfg.rotor2);
  if (std::fabs(r1.sin_alpha) < kPoleThresholdSinAlpha ||
      std::fabs(r2.sin_alpha) < kPoleThresholdSinAlpha)
    throw PoleError("momentum_pair: |sin alpha| below pole threshold");
  const double d = cfg.rotor1.beta - cfg.rotor2.beta + st.phi;
  const WaveTerms w = wave_terms(k, r1, r2, std::cos(d), std::sin(d));
  if (w.is_node()) throw NodeError("momentum_pair: configuration on a node of psi");
  const PhaseGradient grad = phase_gradient_from_terms(k, r1, r2, w);
  return {momentum_from_trig(r1, grad.d_alpha1, grad.d_beta1, grad.d_gamma1),
          momentum_from_trig(r2, grad.d_alpha2, grad.d_beta2, grad.d_gamma2)};
}

inline constexpr double kProjectionFloor = 1e-15;

inline RelativeAngles relative_angles(const MomentumPair& pair) {
  const double l1 = norm(pair.m1);
  const double l2 = norm(pair.m2);
  if (!(l1 > 0.0) || !(l2 > 0.0))
    throw DegenerateProjectionError("relative_angles: zero momentum length");
  const double rho1 = std::hypot(pair.m1.x, pair.m1.y);
  const double rho2 = std::hypot(pair.m2.x, pair.m2.y);
  RelativeAngles out;
  out.cos_big_phi = dot(pair.m1, pair.m2) / (l1 * l2);
  if (rho1 < kProjectionFloor || rho2 < kProjectionFloor)
    throw DegenerateProjectionError("relative_angles: vanishing xy projection");
  const double inv = 1.0 / (rho1 * rho2);
  out.cos_az = (pair.m1.x * pair.m2.x + pair.m1.y * pair.m2.y) * inv;
  out.sin_az = (pair.m1.y * pair.m2.x - pair.m1.x * pair.m2.y) * inv;
  return out;
}

/// Quantum potential from the stationary-state energy decomposition,
/// Q = E - (|M1|^2 + |M2|^2) / (2I).  Exact because the pair state is an
/// energy eigenstate, so the quantum Hamilton-Jacobi energy is constant.
inline double quantum_potential(const PairStateParams& st, const PairConfiguration& cfg,
                                const PhysicalConstants& consts = {}) {
  const MomentumPair mp = momentum_pair(st, cfg);
  const double kin = (dot(mp.m1, mp.m1) + dot(mp.m2, mp.m2)) / (2.0 * consts.inertia);
  return consts.total_energy() - kin;
}

/// Independent route: Q = (M1^2 + M2^2) R / (2 I R) with the angular Laplacians
/// applied to R by central finite differences.  Serves as the oracle for
/// quantum_potential; never used in production estimates.
double quantum_potential_direct(const PairStateParams& st, const PairConfiguration& cfg,
                                double step, const PhysicalConstants& consts = {});

inline ConfigurationReport configuration_report(const PairStateParams& st,
                                                const PairConfiguration& cfg,
                                                const PhysicalConstants& consts = {}) {
  const MomentumPair mp = momentum_pair(st, cfg);
  ConfigurationReport rep;
  rep.momenta = mp;
  rep.len1 = norm(mp.m1);
  rep.len2 = norm(mp.m2);
  rep.mxy1 = std::hypot(mp.m1.x, mp.m1.y);
  rep.mxy2 = std::hypot(mp.m2.x, mp.m2.y);
  const RelativeAngles ra = relative_angles(mp);
  rep.cos_big_phi = ra.cos_big_phi;
  rep.cos_az = ra.cos_az;
  rep.sin_az = ra.sin_az;
  rep.kinetic = (dot(mp.m1, mp.m1) + dot(mp.m2, mp.m2)) / (2.0 * consts.inertia);
  rep.qpot = consts.total_energy() - rep.kinetic;
  rep.density = density(st, cfg);
  return rep;
}

} // namespace bohm

#endif
