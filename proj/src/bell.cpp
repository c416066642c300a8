#include "bohm/bell.hpp"

#include <cmath>

#include "bohm/momenta.hpp"

namespace bohm {

namespace {
void check_unit(const Vec3& v, const char* name) {
  if (std::fabs(norm(v) - 1.0) > 1e-12)
    throw DomainError(std::string("PolarizerSetup: vector ") + name + " is not normalized");
}
} // namespace

void validate(const PolarizerSetup& setup) {
  check_unit(setup.a, "a");
  check_unit(setup.b, "b");
  check_unit(setup.a_prime, "a'");
  check_unit(setup.b_prime, "b'");
}

double qm_correlator(const PairStateParams& state, const Vec3& a, const Vec3& b) {
  check_unit(a, "a");
  check_unit(b, "b");
  const double st = std::sin(state.theta);
  const double cp = std::cos(state.phi), sp = std::sin(state.phi);
  return (a.x * b.x + a.y * b.y) * st * cp + (a.y * b.x - a.x * b.y) * st * sp -
         a.z * b.z;
}

EstimatorResult bohm_correlator(const CorrelationTensors& tensors, const Vec3& a,
                                const Vec3& b) {
  check_unit(a, "a");
  check_unit(b, "b");
  const double av[3] = {a.x, a.y, a.z};
  const double bv[3] = {b.x, b.y, b.z};
  EstimatorResult r;
  double value = 0.0, var = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
      const double c = 3.0 * av[ii] * bv[jj];
      value += c * tensors.normalized.value[ii][jj];
      var += c * c * tensors.normalized.std_error[ii][jj] * tensors.normalized.std_error[ii][jj];
    }
  r.value = value;
  r.std_error = std::sqrt(var);
  r.n_effective = 0.0;
  return r;
}

EstimatorResult bohm_correlator_direct(const PairStateParams& state, const Vec3& a,
                                       const Vec3& b,
                                       const std::vector<WeightedSample>& samples,
                                       const PhysicalConstants& constants) {
  check_unit(a, "a");
  check_unit(b, "b");
  return estimate_average(
      samples,
      [&](const PairConfiguration&, const ConfigurationReport& rep) {
        const double am = dot(a, rep.momenta.m1);
        const double bm = dot(b, rep.momenta.m2);
        return 3.0 * am * bm / (rep.len1 * rep.len2);
      },
      state, constants);
}

double chsh_value(const PolarizerSetup& setup,
                  const std::function<double(const Vec3&, const Vec3&)>& correlator) {
  validate(setup);
  return std::fabs(correlator(setup.a, setup.b) + correlator(setup.a, setup.b_prime) +
                   correlator(setup.a_prime, setup.b) -
                   correlator(setup.a_prime, setup.b_prime));
}

Vec3 planar_polarizer(double chi) { return {std::cos(chi), std::sin(chi), 0.0}; }

PolarizerSetup optimal_singlet_setup() {
  return {planar_polarizer(0.0), planar_polarizer(0.25 * kPi), planar_polarizer(0.5 * kPi),
          planar_polarizer(1.75 * kPi)};
}

} // namespace bohm
