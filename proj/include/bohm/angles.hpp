#ifndef BOHM_ANGLES_HPP
#define BOHM_ANGLES_HPP

#include <array>
#include <cmath>
#include <numbers>

#include "bohm/errors.hpp"

namespace bohm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Orientation of one rigid rotor.  The chart follows the D(beta, alpha, gamma)
/// argument order of the spin-1/2 Wigner functions used throughout: alpha is the
/// polar angle in [0, pi], beta the azimuthal angle in [0, 2pi), and gamma the
/// body rotation in [0, 4pi) (half-integer spin doubles the gamma period).
struct EulerTriple {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Hidden-variable point for the pair: lambda = {lambda1, lambda2}.
struct PairConfiguration {
  EulerTriple rotor1;
  EulerTriple rotor2;
};

inline double wrap_angle(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  // fmod of values barely below 0 can land exactly on the period.
  if (r >= period) r -= period;
  return r;
}

inline bool angles_finite(const EulerTriple& t) {
  return std::isfinite(t.alpha) && std::isfinite(t.beta) && std::isfinite(t.gamma);
}

/// Map arbitrary finite angles onto the canonical chart.  alpha is first reduced
/// mod 2pi; the upper half alpha > pi is folded back via the identity
/// (alpha, beta, gamma) -> (2pi - alpha, beta + pi, gamma + pi), which leaves both
/// spin-1/2 Wigner functions unchanged.
inline EulerTriple canonicalize(const EulerTriple& t) {
  if (!angles_finite(t)) throw DomainError("canonicalize: non-finite Euler angle");
  EulerTriple out = t;
  out.alpha = wrap_angle(out.alpha, kTwoPi);
  if (out.alpha > kPi) {
    out.alpha = kTwoPi - out.alpha;
    out.beta += kPi;
    out.gamma += kPi;
  }
  out.beta = wrap_angle(out.beta, kTwoPi);
  out.gamma = wrap_angle(out.gamma, kFourPi);
  return out;
}

inline PairConfiguration canonicalize(const PairConfiguration& cfg) {
  return {canonicalize(cfg.rotor1), canonicalize(cfg.rotor2)};
}

inline void validate(const EulerTriple& t) {
  if (!angles_finite(t)) throw DomainError("EulerTriple: non-finite angle");
  if (t.alpha < 0.0 || t.alpha > kPi) throw DomainError("EulerTriple: alpha outside [0, pi]");
  if (t.beta < 0.0 || t.beta >= kTwoPi) throw DomainError("EulerTriple: beta outside [0, 2pi)");
  if (t.gamma < 0.0 || t.gamma >= kFourPi) throw DomainError("EulerTriple: gamma outside [0, 4pi)");
}

inline void validate(const PairConfiguration& cfg) {
  validate(cfg.rotor1);
  validate(cfg.rotor2);
}

/// Signed distance between two angles modulo `period`, in (-period/2, period/2].
inline double angle_difference(double a, double b, double period) {
  double d = wrap_angle(a - b, period);
  if (d > 0.5 * period) d -= period;
  return d;
}

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

} // namespace bohm

#endif
