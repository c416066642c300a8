#include "bohm/momenta.hpp"

#include <cmath>

namespace bohm {

namespace {

double bracket_magnitude(const PairStateParams& st, PairConfiguration cfg) {
  const WaveTerms w = wave_terms(st, cfg);
  if (w.is_node())
    throw StencilError("quantum_potential_direct: stencil point on a node");
  return std::sqrt(w.g);
}

// Angular Laplacian (the Casimir of the rotation generators) applied to
// f(alpha, beta, gamma) of one rotor by second-order central differences:
//   M^2 f = -[ f_aa + cot(a) f_a + (f_bb + f_gg - 2 cos(a) f_bg) / sin^2 a ].
// `shift` mutates a copy of the configuration at the requested offsets.
template <typename Shift>
double casimir_fd(const PairStateParams& st, const PairConfiguration& cfg,
                  const EulerTriple& rotor, double f0, double h, Shift shift) {
  const auto f = [&](double da, double db, double dg) {
    PairConfiguration c = cfg;
    shift(c, da, db, dg);
    return bracket_magnitude(st, c);
  };

  const double sa = std::sin(rotor.alpha);
  if (std::fabs(sa) < kPoleThresholdSinAlpha ||
      std::fabs(std::sin(rotor.alpha + h)) < kPoleThresholdSinAlpha ||
      std::fabs(std::sin(rotor.alpha - h)) < kPoleThresholdSinAlpha)
    throw StencilError("quantum_potential_direct: stencil crosses a pole");

  const double fa_p = f(h, 0, 0), fa_m = f(-h, 0, 0);
  const double fb_p = f(0, h, 0), fb_m = f(0, -h, 0);
  const double fg_p = f(0, 0, h), fg_m = f(0, 0, -h);
  const double fbg_pp = f(0, h, h), fbg_pm = f(0, h, -h);
  const double fbg_mp = f(0, -h, h), fbg_mm = f(0, -h, -h);

  const double inv_h2 = 1.0 / (h * h);
  const double f_aa = (fa_p - 2.0 * f0 + fa_m) * inv_h2;
  const double f_a = (fa_p - fa_m) / (2.0 * h);
  const double f_bb = (fb_p - 2.0 * f0 + fb_m) * inv_h2;
  const double f_gg = (fg_p - 2.0 * f0 + fg_m) * inv_h2;
  const double f_bg = (fbg_pp - fbg_pm - fbg_mp + fbg_mm) * (0.25 * inv_h2);

  const double ca = std::cos(rotor.alpha);
  return -(f_aa + (ca / sa) * f_a + (f_bb + f_gg - 2.0 * ca * f_bg) / (sa * sa));
}

} // namespace

double quantum_potential_direct(const PairStateParams& st, const PairConfiguration& cfg,
                                double step, const PhysicalConstants& consts) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw DomainError("quantum_potential_direct: step must be positive");
  const WaveTerms w0 = wave_terms(st, cfg);
  if (w0.is_node())
    throw NodeError("quantum_potential_direct: configuration on a node of psi");
  const double f0 = std::sqrt(w0.g);

  const double lap1 = casimir_fd(st, cfg, cfg.rotor1, f0, step,
                                 [](PairConfiguration& c, double da, double db, double dg) {
                                   c.rotor1.alpha += da;
                                   c.rotor1.beta += db;
                                   c.rotor1.gamma += dg;
                                 });
  const double lap2 = casimir_fd(st, cfg, cfg.rotor2, f0, step,
                                 [](PairConfiguration& c, double da, double db, double dg) {
                                   c.rotor2.alpha += da;
                                   c.rotor2.beta += db;
                                   c.rotor2.gamma += dg;
                                 });

  return (lap1 + lap2) / (2.0 * consts.inertia * f0);
}

} // namespace bohm
