#ifndef BOHM_WAVEFUNCTION_HPP
#define BOHM_WAVEFUNCTION_HPP

#include <cmath>
#include <complex>

#include "bohm/angles.hpp"
#include "bohm/state.hpp"

namespace bohm {

// Normalization of one spin-1/2 Wigner function over its SO(3)-like domain.
inline const double kSpinorNorm = 1.0 / std::sqrt(8.0 * kPi * kPi);
// Product normalization of the two-rotor guiding wave.
inline const double kPairNorm = 1.0 / (8.0 * kPi * kPi);

/// u_up(lambda) = (8 pi^2)^{-1/2} e^{-i beta/2 - i gamma/2} cos(alpha/2)
inline std::complex<double> spinor_up(const EulerTriple& t) {
  const double phase = -0.5 * (t.beta + t.gamma);
  return std::polar(kSpinorNorm * std::cos(0.5 * t.alpha), phase);
}

/// u_down(lambda) = (8 pi^2)^{-1/2} e^{+i beta/2 - i gamma/2} sin(alpha/2)
inline std::complex<double> spinor_down(const EulerTriple& t) {
  const double phase = 0.5 * (t.beta - t.gamma);
  return std::polar(kSpinorNorm * std::sin(0.5 * t.alpha), phase);
}

/// Trigonometric cache for one rotor orientation.  Everything downstream of the
/// guiding wave consumes these values rather than raw angles, so grid samplers
/// can build them from per-axis tables without trig calls in the inner loop.
struct RotorTrig {
  double cos_half, sin_half;  // cos(alpha/2), sin(alpha/2)
  double sin_alpha, cos_alpha;
  double sin_beta, cos_beta;

  static RotorTrig from(const EulerTriple& t) {
    RotorTrig r;
    r.cos_half = std::cos(0.5 * t.alpha);
    r.sin_half = std::sin(0.5 * t.alpha);
    r.sin_alpha = std::sin(t.alpha);
    r.cos_alpha = std::cos(t.alpha);
    r.sin_beta = std::sin(t.beta);
    r.cos_beta = std::cos(t.beta);
    return r;
  }
};

/// State-dependent coefficients of the two superposed product terms.
struct StateCoeffs {
  double c;          // cos(theta/2)
  double s;          // sin(theta/2)
  double cs_quarter; // c*s/4, prefactor of the alpha-derivatives of the phase
  double cos_phi, sin_phi;

  static StateCoeffs from(const PairStateParams& st) {
    StateCoeffs k;
    k.c = std::cos(0.5 * st.theta);
    k.s = std::sin(0.5 * st.theta);
    k.cs_quarter = 0.25 * k.c * k.s;
    k.cos_phi = std::cos(st.phi);
    k.sin_phi = std::sin(st.phi);
    return k;
  }
};

/// The guiding wave in bracket form.  With P = c cos(a1/2) sin(a2/2),
/// Q = s sin(a1/2) cos(a2/2) and D = beta1 - beta2 + phi,
///   psi = (8 pi^2)^{-1} e^{-i(gamma1+gamma2)/2} [ P e^{-i beta1/2 + i beta2/2}
///                                               + Q e^{+i beta1/2 - i beta2/2 + i phi} ],
/// so |W|^2 = P^2 + Q^2 + 2 P Q cos D carries the whole density and the phase
/// gradient reduces to closed expressions in (P, Q, D).
struct WaveTerms {
  double p, q;
  double cos_d, sin_d;
  double g; // |W|^2, dimensionless; R^2 = g * kPairNorm^2

  bool is_node() const { return g <= kNodeThresholdW2; }
};

inline WaveTerms wave_terms(const StateCoeffs& k, const RotorTrig& r1, const RotorTrig& r2,
                            double cos_d, double sin_d) {
  WaveTerms w;
  w.p = k.c * r1.cos_half * r2.sin_half;
  w.q = k.s * r1.sin_half * r2.cos_half;
  w.cos_d = cos_d;
  w.sin_d = sin_d;
  w.g = w.p * w.p + w.q * w.q + 2.0 * w.p * w.q * cos_d;
  return w;
}

inline WaveTerms wave_terms(const PairStateParams& st, const PairConfiguration& cfg) {
  const StateCoeffs k = StateCoeffs::from(st);
  const RotorTrig r1 = RotorTrig::from(cfg.rotor1);
  const RotorTrig r2 = RotorTrig::from(cfg.rotor2);
  const double d = cfg.rotor1.beta - cfg.rotor2.beta + st.phi;
  return wave_terms(k, r1, r2, std::cos(d), std::sin(d));
}

/// psi(lambda) for the pair state, Eq.-(1)-type superposition of the two
/// spinor products.
inline std::complex<double> guiding_wave(const PairStateParams& st, const PairConfiguration& cfg) {
  const StateCoeffs k = StateCoeffs::from(st);
  const std::complex<double> term1 =
      k.c * spinor_up(cfg.rotor1) * spinor_down(cfg.rotor2);
  const std::complex<double> term2 =
      k.s * std::polar(1.0, st.phi) * spinor_down(cfg.rotor1) * spinor_up(cfg.rotor2);
  return term1 + term2;
}

/// R^2(lambda) = |psi|^2; integrates to 1 over the full 6-D domain with measure
/// sin(alpha) d alpha d beta d gamma per rotor.
inline double density(const PairStateParams& st, const PairConfiguration& cfg) {
  return wave_terms(st, cfg).g * kPairNorm * kPairNorm;
}

/// Partial derivatives of the phase S of psi = R exp(iS).
/// d_gamma1 = d_gamma2 = -1/2 exactly: both spinors carry e^{-i gamma/2}.
struct PhaseGradient {
  double d_alpha1, d_beta1, d_gamma1;
  double d_alpha2, d_beta2, d_gamma2;
};

/// Gradient pieces evaluated as Im[(d psi / dx) / psi] analytically; the ratio
/// form is smooth away from nodes, unlike derivatives of arg(psi).
inline PhaseGradient phase_gradient_from_terms(const StateCoeffs& k, const RotorTrig& r1,
                                               const RotorTrig& r2, const WaveTerms& w) {
  const double inv_g = 1.0 / w.g;
  const double t = k.cs_quarter * w.sin_d * inv_g;
  PhaseGradient grad;
  grad.d_alpha1 = t * r2.sin_alpha;
  grad.d_alpha2 = -t * r1.sin_alpha;
  grad.d_beta1 = -0.5 * (w.p * w.p - w.q * w.q) * inv_g;
  grad.d_beta2 = -grad.d_beta1;
  grad.d_gamma1 = -0.5;
  grad.d_gamma2 = -0.5;
  return grad;
}

inline PhaseGradient phase_gradient(const PairStateParams& st, const PairConfiguration& cfg) {
  const StateCoeffs k = StateCoeffs::from(st);
  const RotorTrig r1 = RotorTrig::from(cfg.rotor1);
  const RotorTrig r2 = RotorTrig::from(cfg.rotor2);
  const double d = cfg.rotor1.beta - cfg.rotor2.beta + st.phi;
  const WaveTerms w = wave_terms(k, r1, r2, std::cos(d), std::sin(d));
  if (w.is_node()) throw NodeError("phase_gradient: configuration on a node of psi");
  return phase_gradient_from_terms(k, r1, r2, w);
}

} // namespace bohm

#endif
