#ifndef BOHM_SAMPLING_HPP
#define BOHM_SAMPLING_HPP

#include <cstdint>

#include "bohm/angles.hpp"
#include "bohm/state.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

/// splitmix64: tiny counter-style generator.  Every Monte Carlo sample owns an
/// independent stream keyed by (seed, sample index), which makes the sampler a
/// pure function of the spec and therefore identical for any worker count.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}
  SplitMix64(std::uint64_t seed, std::uint64_t stream)
      : state(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {
    next();
    next();
  }

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Uniform grid over {cos a1, b1, cos a2, b2} with gamma1 = gamma2 = 0 fixed
/// (all observables handled here are flat in the internal rotations).  Cell
/// centers only, so no sample ever touches cos a = +-1 or a coordinate pole.
struct GridSpec {
  std::uint32_t n_cos_alpha1 = 128;
  std::uint32_t n_beta1 = 128;
  std::uint32_t n_cos_alpha2 = 128;
  std::uint32_t n_beta2 = 128;

  std::uint64_t total() const {
    return static_cast<std::uint64_t>(n_cos_alpha1) * n_beta1 * n_cos_alpha2 * n_beta2;
  }

  GridSpec halved() const {
    auto h = [](std::uint32_t n) { return n > 4 ? n / 2 : std::uint32_t{2}; };
    return {h(n_cos_alpha1), h(n_beta1), h(n_cos_alpha2), h(n_beta2)};
  }
};

inline void validate(const GridSpec& g) {
  if (g.n_cos_alpha1 < 2 || g.n_beta1 < 2 || g.n_cos_alpha2 < 2 || g.n_beta2 < 2)
    throw DomainError("GridSpec: all grid counts must be >= 2");
}

/// Rejection sampler parameters.  The analytic envelope
/// |W|^2 <= (cos(theta/2) + sin(theta/2))^2 is rigorous; the safety factor only
/// guards the violation detector.
struct McSpec {
  std::uint64_t n_samples = 10'000'000;
  std::uint64_t seed = 1;
  double envelope_safety = 1.1;
};

inline void validate(const McSpec& m) {
  if (m.n_samples < 1) throw DomainError("McSpec: n_samples must be >= 1");
  if (!(m.envelope_safety > 1.0)) throw DomainError("McSpec: envelope_safety must exceed 1");
}

/// One quantum-equilibrium-weighted draw: weight = R^2 for grid cells,
/// weight = 1 for accepted Monte Carlo samples.
struct WeightedSample {
  PairConfiguration cfg;
  double weight = 0.0;
};

/// Index-addressable view of the grid stream (deterministic order, restartable
/// from any offset).
class GridStream {
public:
  GridStream(PairStateParams state, GridSpec spec);

  std::uint64_t size() const { return spec_.total(); }
  const GridSpec& spec() const { return spec_; }

  /// Sample at flat index ((i1 * n_cos_alpha2 + i2) * n_beta1 + j1) * n_beta2 + j2.
  WeightedSample at(std::uint64_t index) const;

private:
  PairStateParams state_;
  GridSpec spec_;
};

/// Index-addressable view of the Monte Carlo stream: sample k is a pure
/// function of (seed, k).
class McStream {
public:
  McStream(PairStateParams state, McSpec spec);

  std::uint64_t size() const { return spec_.n_samples; }
  const McSpec& spec() const { return spec_; }

  WeightedSample at(std::uint64_t index) const;

private:
  PairStateParams state_;
  McSpec spec_;
  double envelope_;
};

/// Grid cell-center coordinates for axis value i of n.
inline double grid_cos_alpha(std::uint32_t i, std::uint32_t n) {
  return -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
}
inline double grid_beta(std::uint32_t j, std::uint32_t n) {
  return kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
}

/// Draw one accepted configuration (gamma = 0) from the rejection sampler.
/// Throws EnvelopeViolationError if |W|^2 ever exceeds the envelope.
PairConfiguration mc_draw(const PairStateParams& state, const StateCoeffs& coeffs,
                          double envelope, SplitMix64& rng);

} // namespace bohm

#endif
