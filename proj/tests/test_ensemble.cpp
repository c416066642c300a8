#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "bohm/ensemble.hpp"
#include "bohm/oracles.hpp"

using namespace bohm;

namespace {

EnsembleSpec grid_spec(GridSpec g, int threads, bool error_pass = false) {
  EnsembleSpec s;
  s.sampler = SamplerKind::Grid;
  s.grid = g;
  s.threads = threads;
  s.grid_error_pass = error_pass;
  return s;
}

EnsembleSpec mc_spec(std::uint64_t n, std::uint64_t seed, int threads) {
  EnsembleSpec s;
  s.sampler = SamplerKind::Mc;
  s.mc.n_samples = n;
  s.mc.seed = seed;
  s.threads = threads;
  return s;
}

} // namespace

TEST_CASE("grid stream emits midpoint cells in deterministic order") {
  GridStream stream({0.3, 0.0}, GridSpec{2, 2, 2, 2});
  CHECK(stream.size() == 16);
  for (std::uint64_t i = 0; i < stream.size(); ++i) {
    const WeightedSample s = stream.at(i);
    CHECK(std::fabs(std::cos(s.cfg.rotor1.alpha)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::fabs(std::cos(s.cfg.rotor2.alpha)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::sin(s.cfg.rotor1.alpha) > kPoleThresholdSinAlpha);
    CHECK(s.cfg.rotor1.gamma == 0.0);
    CHECK(s.weight >= 0.0);
  }
  CHECK_THROWS_AS(GridStream({0.3, 0.0}, GridSpec{1, 2, 2, 2}), DomainError);
}

TEST_CASE("monte carlo stream is reproducible and respects the envelope") {
  McStream stream({kPi / 3, 0.4}, McSpec{1000, 42, 1.1});
  for (std::uint64_t i = 0; i < 50; ++i) {
    const WeightedSample a = stream.at(i);
    const WeightedSample b = stream.at(i);
    CHECK(a.cfg.rotor1.alpha == b.cfg.rotor1.alpha);
    CHECK(a.cfg.rotor2.beta == b.cfg.rotor2.beta);
    CHECK(a.weight == 1.0);
    CHECK(std::sin(a.cfg.rotor1.alpha) >= kPoleThresholdSinAlpha);
  }
}

TEST_CASE("deterministic reduction: identical results for any thread count") {
  const PairStateParams st{kPi / 3, 0.7};
  std::vector<HistogramRequest> req{{Observable::M1z, {-3.0, 3.0, 0.01}}};

  const EnsembleSummary a = run_ensemble(st, grid_spec({32, 16, 32, 4}, 1), req);
  const EnsembleSummary b = run_ensemble(st, grid_spec({32, 16, 32, 4}, 2), req);
  const EnsembleSummary c = run_ensemble(st, grid_spec({32, 16, 32, 4}, 5), req);
  CHECK(std::memcmp(a.full.sums.data(), b.full.sums.data(), sizeof a.full.sums) == 0);
  CHECK(std::memcmp(a.full.sums.data(), c.full.sums.data(), sizeof a.full.sums) == 0);
  for (std::int64_t i = 0; i < a.histogram(0).bin_count(); ++i)
    CHECK(a.histogram(0).bin_weight(i) == b.histogram(0).bin_weight(i));

  const EnsembleSummary ma = run_ensemble(st, mc_spec(20000, 7, 1), req);
  const EnsembleSummary mb = run_ensemble(st, mc_spec(20000, 7, 2), req);
  CHECK(std::memcmp(ma.full.sums.data(), mb.full.sums.data(), sizeof ma.full.sums) == 0);
  for (std::int64_t i = 0; i < ma.histogram(0).bin_count(); ++i)
    CHECK(ma.histogram(0).bin_weight(i) == mb.histogram(0).bin_weight(i));
}

TEST_CASE("ratio estimators ignore weight rescaling") {
  GridStream stream({kPi / 4, 0.2}, GridSpec{6, 6, 6, 6});
  std::vector<WeightedSample> samples, scaled;
  for (std::uint64_t i = 0; i < stream.size(); ++i) {
    WeightedSample s = stream.at(i);
    if (s.weight <= 0.0) continue;
    samples.push_back(s);
    s.weight *= 7.25;
    scaled.push_back(s);
  }
  auto obs = [](const PairConfiguration&, const ConfigurationReport& rep) {
    return rep.momenta.m1.z;
  };
  const EstimatorResult r1 = estimate_average(samples, obs, {kPi / 4, 0.2});
  const EstimatorResult r2 = estimate_average(scaled, obs, {kPi / 4, 0.2});
  CHECK(r1.value == doctest::Approx(r2.value).epsilon(1e-13));

  CHECK_THROWS_AS(estimate_average({}, obs, {kPi / 4, 0.2}), EmptyEnsembleError);
}

TEST_CASE("histogram bins are half-open with explicit clip accounting") {
  Histogram1D h(HistogramSpec{0.0, 1.0, 0.25});
  h.add(0.25, 1.0); // exactly on an interior edge: goes to the right bin
  h.add(0.9999, 1.0);
  h.add(-0.1, 2.0);
  h.add(1.0, 3.0); // exactly mu_max clips high
  CHECK(h.bin_count() == 4);
  CHECK(h.bin_weight(0) == 0.0);
  CHECK(h.bin_weight(1) == 1.0);
  CHECK(h.bin_weight(3) == 1.0);
  CHECK(h.clipped_low() == 2.0);
  CHECK(h.clipped_high() == 3.0);
  CHECK(h.total_weight() == 7.0);
  CHECK(h.integrate_density(0.0, 1.0) == doctest::Approx(2.0 / 7.0));
}

TEST_CASE("monte carlo sampler reproduces the product-state marginal") {
  // Independent oracle: at theta = 0 the weight factorizes and
  // <cos alpha1> = int x (1+x)/2 dx / int (1+x)/2 dx = 1/3.
  const PairStateParams st{0.0, 0.0};
  const EnsembleSummary s = run_ensemble(st, mc_spec(400000, 11, 0), {});
  McStream stream(st, McSpec{400000, 11, 1.1});
  double sum = 0.0;
  const std::uint64_t n = 400000;
  for (std::uint64_t i = 0; i < n; ++i) sum += std::cos(stream.at(i).cfg.rotor1.alpha);
  const double mean = sum / static_cast<double>(n);
  CHECK(mean == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  // The engine consumed the same stream: its product-state M1z average is 1/2.
  CHECK(s.average(scalar::kM1z).value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("grid averages against closed-form references") {
  const PairStateParams st{kPi / 3, 0.0};
  const EnsembleSummary s = run_ensemble(st, grid_spec({96, 64, 96, 4}, 0, true), {});

  CHECK(s.average(scalar::kM1z).value == doctest::Approx(0.25).epsilon(4e-3));
  CHECK(s.average(scalar::kM2z).value == doctest::Approx(-0.25).epsilon(4e-3));
  CHECK(s.average(scalar::kLen1Sq).value == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(s.average(scalar::kLen2Sq).value == doctest::Approx(0.5).epsilon(1e-2));
  // Mean lengths agree between the rotors even though pointwise values differ.
  CHECK(s.average(scalar::kLen1).value ==
        doctest::Approx(s.average(scalar::kLen2).value).epsilon(2e-3));
  // Error estimate from the halved grid brackets the truth within a few units.
  const EstimatorResult m1z = s.average(scalar::kM1z);
  CHECK(std::fabs(m1z.value - 0.25) <= 5.0 * std::max(m1z.std_error, 1e-5));
}

TEST_CASE("independent-rotor references at theta = 0") {
  const EnsembleSummary s = run_ensemble({0.0, 0.0}, grid_spec({128, 32, 128, 4}, 0), {});
  CHECK(s.average(scalar::kCosPhi).value == doctest::Approx(-16.0 / 25.0).epsilon(5e-3));
  CHECK(s.average(scalar::kDiffLenSq).value == doctest::Approx(1.0 / 9.0).epsilon(1e-2));
  CHECK(s.average(scalar::kMxy1).value == doctest::Approx(kPi / 8.0).epsilon(5e-3));
  const CorrelationTensors t = correlation_tensor(s);
  CHECK(t.bx.value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(t.bz.value == doctest::Approx(48.0 / 25.0).epsilon(5e-3));
  CHECK(t.c_m.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("tensor signs and azimuthal identity at maximal entanglement") {
  const PairStateParams st{0.5 * kPi, 0.5 * kPi};
  const EnsembleSummary s = run_ensemble(st, grid_spec({64, 64, 64, 4}, 0), {});
  const CorrelationTensors t = correlation_tensor(s);
  // Eq.-(41)-type structure: xx = Bx cos(phi)/3 = 0, xy = -Bx sin(phi)/3.
  CHECK(t.normalized.value[0][0] == doctest::Approx(0.0).epsilon(2e-3));
  CHECK(t.normalized.value[0][1] == doctest::Approx(-1.0 / 3.0).epsilon(2e-2));
  CHECK(t.normalized.value[1][0] == doctest::Approx(1.0 / 3.0).epsilon(2e-2));
  CHECK(t.normalized.value[2][2] == doctest::Approx(-1.0 / 3.0).epsilon(2e-2));
  CHECK(t.normalized.value[0][2] == doctest::Approx(0.0).epsilon(2e-3));
  CHECK(t.normalized.value[2][0] == doctest::Approx(0.0).epsilon(2e-3));
  CHECK(t.bx.value == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(t.bz.value == doctest::Approx(1.0).epsilon(2e-2));

  const AngleStatistics a = angle_statistics(s);
  // phi_rel = phi pointwise at theta = pi/2.
  CHECK(a.cos_az.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(a.sin_az.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.c_b.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.delta_cos_az.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("singlet geometry is rigid") {
  const EnsembleSummary s =
      run_ensemble({0.5 * kPi, kPi}, grid_spec({64, 64, 64, 4}, 0), {});
  const AngleStatistics a = angle_statistics(s);
  CHECK(a.cos_big_phi.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(a.delta_cos_big_phi.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("estimated density tracks the closed form at modest resolution") {
  std::vector<HistogramRequest> req{{Observable::M1z, {-3.0, 3.0, 0.02}}};
  const EnsembleSummary s =
      run_ensemble({0.5 * kPi, 0.0}, grid_spec({96, 96, 96, 2}, 0), req);
  const Histogram1D& h = s.histogram(0);
  const AnalyticDistribution oracle = AnalyticDistribution::make(DistKind::M1zMaxEnt);
  double sup = 0.0;
  for (std::int64_t i = 0; i < h.bin_count(); ++i) {
    const double lo = h.bin_left(i), hi = h.bin_left(i + 1);
    if (std::fabs(lo - 0.5) < 0.05 || std::fabs(lo + 0.5) < 0.05) continue;
    sup = std::max(sup, std::fabs(h.density(i) - oracle.bin_average(lo, hi)));
  }
  CHECK(sup <= 0.05);
}

TEST_CASE("mc batch-means error brackets the known mean") {
  const EnsembleSummary s = run_ensemble({kPi / 3, 0.0}, mc_spec(200000, 3, 0), {});
  const EstimatorResult m1z = s.average(scalar::kM1z);
  CHECK(std::fabs(m1z.value - 0.25) <= 4.0 * m1z.std_error);
  CHECK(m1z.n_effective == doctest::Approx(200000.0).epsilon(1e-9));
  CHECK(s.monitor.passed());
}
