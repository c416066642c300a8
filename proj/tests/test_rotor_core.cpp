#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "bohm/sampling.hpp"
#include "bohm/wavefunction.hpp"

using namespace bohm;

namespace {

PairConfiguration random_config(SplitMix64& rng) {
  PairConfiguration cfg;
  cfg.rotor1 = {std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, kTwoPi),
                rng.uniform(0.0, kFourPi)};
  cfg.rotor2 = {std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, kTwoPi),
                rng.uniform(0.0, kFourPi)};
  return cfg;
}

// Central finite difference of the phase via arg(psi(x+h)/psi(x-h)), which is
// immune to branch cuts as long as the local phase change stays below pi.
double fd_phase_partial(const PairStateParams& st, const PairConfiguration& cfg, int axis,
                        double h) {
  auto shifted = [&](double s) {
    PairConfiguration c = cfg;
    double* fields[6] = {&c.rotor1.alpha, &c.rotor1.beta, &c.rotor1.gamma,
                         &c.rotor2.alpha, &c.rotor2.beta, &c.rotor2.gamma};
    *fields[axis] += s;
    return guiding_wave(st, c);
  };
  const std::complex<double> ratio = shifted(h) / shifted(-h);
  return std::arg(ratio) / (2.0 * h);
}

} // namespace

TEST_CASE("spinor_up matches the spin-1/2 Wigner function") {
  const double n0 = 1.0 / std::sqrt(8.0 * kPi * kPi);

  const std::complex<double> a = spinor_up({0.0, 0.0, 0.0});
  CHECK(a.real() == doctest::Approx(n0).epsilon(1e-12));
  CHECK(a.imag() == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(std::abs(spinor_up({kPi, 1.3, 2.4})) == doctest::Approx(0.0).epsilon(1e-12));

  const std::complex<double> c = spinor_up({0.5 * kPi, kPi, 0.0});
  CHECK(std::abs(c) == doctest::Approx(n0 * std::cos(0.25 * kPi)).epsilon(1e-12));
  CHECK(std::arg(c) == doctest::Approx(-0.5 * kPi).epsilon(1e-12));
}

TEST_CASE("spinor_down matches the spin-1/2 Wigner function") {
  const double n0 = 1.0 / std::sqrt(8.0 * kPi * kPi);

  CHECK(std::abs(spinor_down({0.0, 0.7, 1.9})) == doctest::Approx(0.0).epsilon(1e-12));

  const std::complex<double> b = spinor_down({kPi, 0.0, 0.0});
  CHECK(b.real() == doctest::Approx(n0).epsilon(1e-12));
  CHECK(b.imag() == doctest::Approx(0.0).epsilon(1e-12));

  const std::complex<double> c = spinor_down({0.5 * kPi, 0.5 * kPi, 0.0});
  CHECK(std::abs(c) == doctest::Approx(n0 * std::sin(0.25 * kPi)).epsilon(1e-12));
  CHECK(std::arg(c) == doctest::Approx(0.25 * kPi).epsilon(1e-12));
}

TEST_CASE("guiding wave superposes the two product terms") {
  // Product state: single term, real value 1/(16 pi^2).
  PairConfiguration cfg{{0.5 * kPi, 0.0, 0.0}, {0.5 * kPi, 0.0, 0.0}};
  const std::complex<double> psi = guiding_wave({0.0, 0.0}, cfg);
  CHECK(psi.real() == doctest::Approx(1.0 / (16.0 * kPi * kPi)).epsilon(1e-12));
  CHECK(psi.imag() == doctest::Approx(0.0).epsilon(1e-15));

  // theta = pi: only the second term, which vanishes at alpha1 = 0.
  PairConfiguration cfg2{{0.0, 0.4, 1.0}, {1.1, 2.0, 0.3}};
  CHECK(std::abs(guiding_wave({kPi, 0.7}, cfg2)) == doctest::Approx(0.0).epsilon(1e-13));

  // Singlet antisymmetry: psi vanishes when both rotors coincide.
  PairConfiguration cfg3{{1.234, 2.345, 0.456}, {1.234, 2.345, 0.456}};
  CHECK(std::abs(guiding_wave({0.5 * kPi, kPi}, cfg3)) == doctest::Approx(0.0).epsilon(1e-13));

  // Squared magnitude agrees with the bracket-form density everywhere.
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const PairConfiguration c = random_config(rng);
    const PairStateParams st{rng.uniform(0.0, kPi), rng.uniform(0.0, kTwoPi)};
    const double r2 = std::norm(guiding_wave(st, c));
    CHECK(density(st, c) == doctest::Approx(r2).epsilon(1e-10));
  }
}

TEST_CASE("density examples and node behaviour") {
  PairConfiguration cfg{{0.5 * kPi, 0.0, 0.0}, {0.5 * kPi, 0.0, 0.0}};
  CHECK(density({0.0, 0.0}, cfg) ==
        doctest::Approx(1.0 / (256.0 * kPi * kPi * kPi * kPi)).epsilon(1e-12));

  PairConfiguration node{{0.9, 1.1, 0.2}, {0.9, 1.1, 0.2}};
  CHECK(density({0.5 * kPi, kPi}, node) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(phase_gradient({0.5 * kPi, kPi}, node), NodeError);
}

TEST_CASE("grid quadrature of the density is exactly normalized") {
  // The integrand is linear in each cos(alpha) and harmonic in the betas, so
  // the midpoint product rule is exact at any resolution >= 2.
  for (const GridSpec spec : {GridSpec{4, 4, 4, 4}, GridSpec{8, 6, 4, 2}}) {
    for (const PairStateParams st :
         {PairStateParams{0.0, 0.0}, PairStateParams{kPi / 3, 0.5}, PairStateParams{0.5 * kPi, kPi}}) {
      GridStream stream(st, spec);
      double sum = 0.0;
      for (std::uint64_t i = 0; i < stream.size(); ++i) sum += stream.at(i).weight;
      const double cell = (2.0 / spec.n_cos_alpha1) * (kTwoPi / spec.n_beta1) *
                          (2.0 / spec.n_cos_alpha2) * (kTwoPi / spec.n_beta2);
      const double gamma_volume = kFourPi * kFourPi;
      CHECK(sum * cell * gamma_volume == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("phase gradient of the product state is constant") {
  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const PairConfiguration cfg = random_config(rng);
    if (wave_terms({0.0, 0.0}, cfg).is_node()) continue;
    const PhaseGradient g = phase_gradient({0.0, 0.0}, cfg);
    CHECK(g.d_alpha1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.d_alpha2 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.d_beta1 == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(g.d_beta2 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.d_gamma1 == -0.5);
    CHECK(g.d_gamma2 == -0.5);
  }
}

TEST_CASE("gamma partials are exactly -1/2 for any state") {
  SplitMix64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const PairStateParams st{rng.uniform(0.0, kPi), rng.uniform(0.0, kTwoPi)};
    const PairConfiguration cfg = random_config(rng);
    if (wave_terms(st, cfg).g < 1e-8) continue;
    const PhaseGradient g = phase_gradient(st, cfg);
    CHECK(g.d_gamma1 == -0.5);
    CHECK(g.d_gamma2 == -0.5);
  }
}

TEST_CASE("analytic phase gradient agrees with the finite-difference oracle") {
  // Spec-pinned spot check first.
  {
    const PairStateParams st{0.5 * kPi, 0.0};
    const PairConfiguration cfg{{0.5 * kPi, 0.0, 0.0}, {0.5 * kPi, 0.5 * kPi, 0.0}};
    const PhaseGradient g = phase_gradient(st, cfg);
    const double got[6] = {g.d_alpha1, g.d_beta1, g.d_gamma1,
                           g.d_alpha2, g.d_beta2, g.d_gamma2};
    for (int axis = 0; axis < 6; ++axis)
      CHECK(got[axis] == doctest::Approx(fd_phase_partial(st, cfg, axis, 1e-6)).epsilon(1e-8));
  }

  // Property: 10^4 random non-node configurations across states.
  SplitMix64 rng(7);
  const PairStateParams states[4] = {{0.0, 0.0}, {kPi / 3, 0.5 * kPi}, {0.5 * kPi, 0.0},
                                     {0.5 * kPi, kPi}};
  int checked = 0;
  double worst = 0.0;
  while (checked < 10000) {
    const PairStateParams st = states[rng.next() % 4];
    const PairConfiguration cfg = random_config(rng);
    if (wave_terms(st, cfg).g < 1e-4) continue; // stay away from nodes for the FD stencil
    const PhaseGradient g = phase_gradient(st, cfg);
    const double got[6] = {g.d_alpha1, g.d_beta1, g.d_gamma1,
                           g.d_alpha2, g.d_beta2, g.d_gamma2};
    for (int axis = 0; axis < 6; ++axis)
      worst = std::max(worst, std::fabs(got[axis] - fd_phase_partial(st, cfg, axis, 1e-6)));
    ++checked;
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("phi acts as a shift of the relative azimuth") {
  // Exact identity in these conventions: the state (theta, phi) at
  // {beta1, beta2} matches the state (theta, 0) at {beta1 + phi, beta2}.
  SplitMix64 rng(8);
  for (int i = 0; i < 300; ++i) {
    const double theta = rng.uniform(0.0, kPi);
    const double phi = rng.uniform(0.0, kTwoPi);
    const PairConfiguration cfg = random_config(rng);
    PairConfiguration shifted = cfg;
    shifted.rotor1.beta += phi;
    const double d1 = density({theta, phi}, cfg);
    const double d2 = density({theta, 0.0}, shifted);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-10));
    if (d1 < 1e-8) continue;
    const PhaseGradient g1 = phase_gradient({theta, phi}, cfg);
    const PhaseGradient g2 = phase_gradient({theta, 0.0}, shifted);
    CHECK(g1.d_alpha1 == doctest::Approx(g2.d_alpha1).epsilon(1e-9));
    CHECK(g1.d_beta1 == doctest::Approx(g2.d_beta1).epsilon(1e-9));
    CHECK(g1.d_alpha2 == doctest::Approx(g2.d_alpha2).epsilon(1e-9));
    CHECK(g1.d_beta2 == doctest::Approx(g2.d_beta2).epsilon(1e-9));
  }
}

TEST_CASE("observables are flat in the internal rotations") {
  SplitMix64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const PairStateParams st{rng.uniform(0.0, kPi), rng.uniform(0.0, kTwoPi)};
    PairConfiguration cfg = random_config(rng);
    if (wave_terms(st, cfg).g < 1e-8) continue;
    const double d0 = density(st, cfg);
    const PhaseGradient g0 = phase_gradient(st, cfg);
    cfg.rotor1.gamma += rng.uniform(-10.0, 10.0);
    cfg.rotor2.gamma += rng.uniform(-10.0, 10.0);
    CHECK(density(st, cfg) == doctest::Approx(d0).epsilon(1e-12));
    const PhaseGradient g1 = phase_gradient(st, cfg);
    CHECK(g1.d_alpha1 == doctest::Approx(g0.d_alpha1).epsilon(1e-12));
    CHECK(g1.d_beta1 == doctest::Approx(g0.d_beta1).epsilon(1e-12));
  }
}

TEST_CASE("canonicalization preserves the physics") {
  SplitMix64 rng(10);
  for (int i = 0; i < 300; ++i) {
    EulerTriple wild{rng.uniform(-8.0, 8.0), rng.uniform(-20.0, 20.0),
                     rng.uniform(-30.0, 30.0)};
    const EulerTriple canon = canonicalize(wild);
    CHECK(canon.alpha >= 0.0);
    CHECK(canon.alpha <= kPi);
    CHECK(canon.beta >= 0.0);
    CHECK(canon.beta < kTwoPi);
    CHECK(canon.gamma >= 0.0);
    CHECK(canon.gamma < kFourPi);
    // The spinor magnitudes and the density are chart-independent; the value
    // itself may flip sign when beta wraps by 2 pi (SU(2) double cover).
    CHECK(std::abs(spinor_up(canon)) == doctest::Approx(std::abs(spinor_up(wild))).epsilon(1e-10));
    CHECK(std::abs(spinor_down(canon)) ==
          doctest::Approx(std::abs(spinor_down(wild))).epsilon(1e-10));
  }
  CHECK_THROWS_AS(canonicalize(EulerTriple{std::nan(""), 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validate(EulerTriple{-0.1, 0.0, 0.0}), DomainError);
}

TEST_CASE("state and constants validation") {
  CHECK_THROWS_AS(validate(PairStateParams{-0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(validate(PairStateParams{0.5, -1.0}), DomainError);
  PhysicalConstants c;
  CHECK(c.total_energy() == doctest::Approx(0.75));
  c.inertia = 2.0;
  CHECK(c.total_energy() == doctest::Approx(0.375));
  c.inertia = -1.0;
  CHECK_THROWS_AS(validate(c), DomainError);
}
