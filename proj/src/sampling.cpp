#include "bohm/sampling.hpp"

#include <cmath>

namespace bohm {

GridStream::GridStream(PairStateParams state, GridSpec spec) : state_(state), spec_(spec) {
  validate(state_);
  validate(spec_);
}

WeightedSample GridStream::at(std::uint64_t index) const {
  const std::uint64_t nb2 = spec_.n_beta2;
  const std::uint64_t nb1 = spec_.n_beta1;
  const std::uint64_t na2 = spec_.n_cos_alpha2;
  const auto j2 = static_cast<std::uint32_t>(index % nb2);
  index /= nb2;
  const auto j1 = static_cast<std::uint32_t>(index % nb1);
  index /= nb1;
  const auto i2 = static_cast<std::uint32_t>(index % na2);
  const auto i1 = static_cast<std::uint32_t>(index / na2);

  WeightedSample s;
  s.cfg.rotor1 = {std::acos(grid_cos_alpha(i1, spec_.n_cos_alpha1)), grid_beta(j1, spec_.n_beta1), 0.0};
  s.cfg.rotor2 = {std::acos(grid_cos_alpha(i2, spec_.n_cos_alpha2)), grid_beta(j2, spec_.n_beta2), 0.0};
  s.weight = density(state_, s.cfg);
  return s;
}

PairConfiguration mc_draw(const PairStateParams& state, const StateCoeffs& coeffs,
                          double envelope, SplitMix64& rng) {
  for (;;) {
    const double x1 = rng.uniform(-1.0, 1.0);
    const double b1 = rng.uniform(0.0, kTwoPi);
    const double x2 = rng.uniform(-1.0, 1.0);
    const double b2 = rng.uniform(0.0, kTwoPi);
    const double u = rng.uniform();

    const double sin_a1 = std::sqrt(std::max(0.0, 1.0 - x1 * x1));
    const double sin_a2 = std::sqrt(std::max(0.0, 1.0 - x2 * x2));
    if (sin_a1 < kPoleThresholdSinAlpha || sin_a2 < kPoleThresholdSinAlpha) continue;

    const double p = coeffs.c * std::sqrt(0.5 * (1.0 + x1)) * std::sqrt(0.5 * (1.0 - x2));
    const double q = coeffs.s * std::sqrt(0.5 * (1.0 - x1)) * std::sqrt(0.5 * (1.0 + x2));
    const double g = p * p + q * q + 2.0 * p * q * std::cos(b1 - b2 + state.phi);
    if (g > envelope)
      throw EnvelopeViolationError("mc_draw: |W|^2 exceeded the analytic envelope");
    if (g <= kNodeThresholdW2) continue;
    if (u * envelope < g)
      return {{std::acos(x1), b1, 0.0}, {std::acos(x2), b2, 0.0}};
  }
}

McStream::McStream(PairStateParams state, McSpec spec) : state_(state), spec_(spec) {
  validate(state_);
  validate(spec_);
  const StateCoeffs k = StateCoeffs::from(state_);
  const double bound = (k.c + k.s) * (k.c + k.s);
  envelope_ = bound * spec_.envelope_safety;
}

WeightedSample McStream::at(std::uint64_t index) const {
  SplitMix64 rng(spec_.seed, index);
  const StateCoeffs k = StateCoeffs::from(state_);
  return {mc_draw(state_, k, envelope_, rng), 1.0};
}

} // namespace bohm
