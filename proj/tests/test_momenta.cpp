#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bohm/momenta.hpp"
#include "bohm/sampling.hpp"

using namespace bohm;

namespace {

PairConfiguration random_config(SplitMix64& rng) {
  return {{std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, kTwoPi),
           rng.uniform(0.0, kFourPi)},
          {std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, kTwoPi),
           rng.uniform(0.0, kFourPi)}};
}

} // namespace

TEST_CASE("single-rotor momentum from the spin-up gradient") {
  // Spin-up phase: S_a = 0, S_b = -1/2, S_g = -1/2.
  const Vec3 m1 = momentum_from_gradient({0.5 * kPi, 0.0, 0.0}, 0.0, -0.5, -0.5);
  CHECK(m1.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m1.y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m1.z == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(norm(m1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  const Vec3 m2 = momentum_from_gradient({0.5 * kPi, 0.5 * kPi, 0.0}, 0.0, -0.5, -0.5);
  CHECK(m2.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m2.y == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m2.z == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(momentum_from_gradient({1e-12, 0.0, 0.0}, 0.0, -0.5, -0.5), PoleError);
}

TEST_CASE("product-state momenta reproduce the closed-form orbit geometry") {
  // Rotor 1 (spin up): constant polar angle alpha/2, |M| = 1/(2 cos(alpha/2)),
  // Mz = 1/2.  Rotor 2 (spin down) is the mirror image with Mz = -1/2.
  SplitMix64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const PairConfiguration cfg = random_config(rng);
    if (wave_terms({0.0, 0.0}, cfg).g < 1e-10) continue;
    const MomentumPair mp = momentum_pair({0.0, 0.0}, cfg);
    const double half1 = 0.5 * cfg.rotor1.alpha;
    CHECK(mp.m1.z == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(norm(mp.m1) == doctest::Approx(0.5 / std::cos(half1)).epsilon(1e-10));
    CHECK(mp.m1.z / norm(mp.m1) == doctest::Approx(std::cos(half1)).epsilon(1e-10));
    const double half2 = 0.5 * cfg.rotor2.alpha;
    CHECK(mp.m2.z == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(norm(mp.m2) == doctest::Approx(0.5 / std::sin(half2)).epsilon(1e-10));
  }
}

TEST_CASE("principal axis and the axis-projection identity") {
  const Vec3 e0 = principal_axis({0.0, 1.3, 0.0});
  CHECK(e0.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(e0.z == doctest::Approx(1.0).epsilon(1e-14));
  const Vec3 e1 = principal_axis({0.5 * kPi, 0.0, 0.0});
  CHECK(e1.y == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e1.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(e1.z == doctest::Approx(0.0).epsilon(1e-14));

  // e.M = 1/2 for both rotors at random non-node configurations and states.
  SplitMix64 rng(22);
  const PairStateParams states[4] = {{0.0, 0.0}, {kPi / 3, 0.5 * kPi}, {0.5 * kPi, 0.0},
                                     {0.5 * kPi, kPi}};
  int checked = 0;
  double worst = 0.0;
  while (checked < 10000) {
    const PairStateParams st = states[rng.next() % 4];
    const PairConfiguration cfg = random_config(rng);
    if (wave_terms(st, cfg).g < 1e-5) continue;
    const MomentumPair mp = momentum_pair(st, cfg);
    worst = std::max(worst, std::fabs(dot(principal_axis(cfg.rotor1), mp.m1) - 0.5));
    worst = std::max(worst, std::fabs(dot(principal_axis(cfg.rotor2), mp.m2) - 0.5));
    ++checked;
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("pointwise invariants of the momentum pair") {
  SplitMix64 rng(23);
  const PairStateParams states[4] = {{0.0, 0.0}, {kPi / 6, kPi}, {kPi / 3, 0.5 * kPi},
                                     {0.5 * kPi, 0.3}};
  int checked = 0;
  double worst_mz = 0.0, min_len = 1e300;
  while (checked < 10000) {
    const PairStateParams st = states[rng.next() % 4];
    const PairConfiguration cfg = random_config(rng);
    if (wave_terms(st, cfg).g < 1e-5) continue;
    const MomentumPair mp = momentum_pair(st, cfg);
    worst_mz = std::max(worst_mz, std::fabs(mp.m1.z + mp.m2.z));
    min_len = std::min({min_len, norm(mp.m1), norm(mp.m2)});
    ++checked;
  }
  CHECK(worst_mz <= 1e-10);
  CHECK(min_len >= 0.5 - 1e-10);
}

TEST_CASE("equal momentum lengths at maximal entanglement only") {
  SplitMix64 rng(24);
  double worst = 0.0;
  int checked = 0;
  while (checked < 5000) {
    const PairConfiguration cfg = random_config(rng);
    const PairStateParams st{0.5 * kPi, rng.uniform(0.0, kTwoPi)};
    if (wave_terms(st, cfg).g < 1e-5) continue;
    const MomentumPair mp = momentum_pair(st, cfg);
    worst = std::max(worst, std::fabs(norm(mp.m1) - norm(mp.m2)));
    ++checked;
  }
  CHECK(worst <= 1e-10);

  // At intermediate entanglement the equality holds only on average: exhibit a
  // configuration with clearly different lengths.
  const PairStateParams st{kPi / 3, 0.0};
  const PairConfiguration cfg{{1.0, 0.7, 0.0}, {2.2, 4.1, 0.0}};
  const MomentumPair mp = momentum_pair(st, cfg);
  CHECK(std::fabs(norm(mp.m1) - norm(mp.m2)) > 1e-3);
}

TEST_CASE("quantum potential from the energy decomposition") {
  // kinetic = 1/2 and Q = 1/4 at the symmetric product-state configuration.
  const PairConfiguration cfg{{0.5 * kPi, 0.0, 0.0}, {0.5 * kPi, 0.0, 0.0}};
  CHECK(quantum_potential({0.0, 0.0}, cfg) == doctest::Approx(0.25).epsilon(1e-12));

  // Polar-angle-zero limit: |M1| = |M2| = 1/2, kinetic = 1/4, Q = 1/2.  The
  // exact configuration sits on a coordinate pole, so approach it.
  const PairConfiguration near_pole{{1e-4, 0.3, 0.0}, {kPi - 1e-4, 1.1, 0.0}};
  CHECK(quantum_potential({0.0, 0.0}, near_pole) == doctest::Approx(0.5).epsilon(1e-6));

  // Q scales as 1/I.
  PhysicalConstants doubled;
  doubled.inertia = 2.0;
  CHECK(quantum_potential({0.0, 0.0}, cfg, doubled) ==
        doctest::Approx(0.5 * quantum_potential({0.0, 0.0}, cfg)).epsilon(1e-14));
}

TEST_CASE("finite-difference Laplacian oracle confirms the quantum potential") {
  const PairConfiguration cfg{{0.5 * kPi, 0.0, 0.0}, {0.5 * kPi, 0.0, 0.0}};
  CHECK(quantum_potential_direct({0.0, 0.0}, cfg, 1e-3) ==
        doctest::Approx(0.25).epsilon(1e-5));

  // 10^3 random interior configurations, several states, step 1e-3.
  SplitMix64 rng(25);
  const PairStateParams states[3] = {{kPi / 3, 0.25 * kPi}, {0.5 * kPi, kPi}, {kPi / 6, 0.0}};
  int checked = 0;
  double worst = 0.0;
  while (checked < 1000) {
    const PairStateParams st = states[rng.next() % 3];
    const PairConfiguration cfg2 = random_config(rng);
    if (std::sin(cfg2.rotor1.alpha) < 0.2 || std::sin(cfg2.rotor2.alpha) < 0.2) continue;
    if (wave_terms(st, cfg2).g < 1e-2) continue;
    const double q_identity = quantum_potential(st, cfg2);
    const double q_direct = quantum_potential_direct(st, cfg2, 1e-3);
    worst = std::max(worst, std::fabs(q_identity - q_direct));
    ++checked;
  }
  CHECK(worst <= 1e-4);

  // Doubling I halves the direct value too.
  PhysicalConstants doubled;
  doubled.inertia = 2.0;
  CHECK(quantum_potential_direct({0.0, 0.0}, cfg, 1e-3, doubled) ==
        doctest::Approx(0.5 * quantum_potential_direct({0.0, 0.0}, cfg, 1e-3)).epsilon(1e-10));

  // Stencil across a pole is refused.
  const PairConfiguration near_pole{{5e-4, 0.3, 0.0}, {1.0, 1.1, 0.0}};
  CHECK_THROWS_AS(quantum_potential_direct({0.0, 0.0}, near_pole, 1e-3), StencilError);
}

TEST_CASE("relative angles of the momentum pair") {
  MomentumPair anti{{0.3, -0.2, 0.6}, {-0.3, 0.2, -0.6}};
  CHECK(relative_angles(anti).cos_big_phi == doctest::Approx(-1.0).epsilon(1e-12));

  MomentumPair mirrored{{0.0, 0.5, 0.5}, {0.0, 0.5, -0.5}};
  const RelativeAngles ra = relative_angles(mirrored);
  CHECK(ra.cos_big_phi == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(ra.cos_az == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ra.sin_az == doctest::Approx(0.0).epsilon(1e-13));

  MomentumPair degenerate{{0.0, 0.0, 0.5}, {0.1, 0.2, -0.5}};
  CHECK_THROWS_AS(relative_angles(degenerate), DegenerateProjectionError);
}

TEST_CASE("relative azimuth equals phi pointwise at maximal entanglement") {
  SplitMix64 rng(26);
  for (int i = 0; i < 200; ++i) {
    const double phi = rng.uniform(0.0, kTwoPi);
    const PairConfiguration cfg = random_config(rng);
    const PairStateParams st{0.5 * kPi, phi};
    if (wave_terms(st, cfg).g < 1e-5) continue;
    const RelativeAngles ra = relative_angles(momentum_pair(st, cfg));
    CHECK(ra.cos_az == doctest::Approx(std::cos(phi)).epsilon(1e-9));
    CHECK(ra.sin_az == doctest::Approx(std::sin(phi)).epsilon(1e-9));
  }
}
