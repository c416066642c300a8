#include "bohm/entropy.hpp"

#include <cmath>

#include "bohm/wavefunction.hpp"

namespace bohm {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p outside [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double hemisphere_probability(const Histogram1D& hist) {
  if (hist.total_weight() <= 0.0)
    throw EmptyEnsembleError("hemisphere_probability: empty histogram");
  double mass = hist.integrate_density(0.0, hist.mu_max());
  mass += hist.clipped_high() / hist.total_weight();
  return mass;
}

double differential_entropy(const Histogram1D& hist, double max_clipped_fraction) {
  if (hist.total_weight() <= 0.0)
    throw EmptyEnsembleError("differential_entropy: empty histogram");
  if (hist.clipped_fraction() >= max_clipped_fraction)
    throw ClippedMassError("differential_entropy: clipped mass too large for a reliable estimate");
  const double eps = hist.epsilon();
  double h = 0.0;
  for (std::int64_t i = 0; i < hist.bin_count(); ++i) {
    const double p = hist.density(i);
    if (p > 0.0) h -= p * std::log2(p) * eps;
  }
  return h;
}

double discretized_entropy(const Histogram1D& hist, unsigned nu) {
  if (hist.total_weight() <= 0.0)
    throw EmptyEnsembleError("discretized_entropy: empty histogram");
  const double delta = std::ldexp(1.0, -static_cast<int>(nu)); // 2^-nu
  const double ratio = delta / hist.epsilon();
  const auto group = static_cast<std::int64_t>(std::llround(ratio));
  if (group < 1 || std::fabs(ratio - static_cast<double>(group)) > 1e-9 * ratio)
    throw ResolutionError("discretized_entropy: histogram bins do not refine width 2^-nu");
  const double origin = hist.mu_min() / delta;
  if (std::fabs(origin - std::round(origin)) > 1e-9)
    throw ResolutionError("discretized_entropy: histogram origin off the 2^-nu lattice");

  const double in_range = hist.total_weight() - hist.clipped_mass();
  if (in_range <= 0.0) throw EmptyEnsembleError("discretized_entropy: all mass clipped");
  double h = 0.0;
  for (std::int64_t start = 0; start < hist.bin_count(); start += group) {
    double mass = 0.0;
    const std::int64_t stop = std::min(start + group, hist.bin_count());
    for (std::int64_t i = start; i < stop; ++i) mass += hist.bin_weight(i);
    const double p = mass / in_range;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

EntropyReport entropy_report(const PairStateParams& state, const Histogram1D& m1z_hist,
                             const std::vector<unsigned>& nu_values) {
  EntropyReport rep;
  rep.p_plus = hemisphere_probability(m1z_hist);
  rep.h_binary_pm = binary_entropy(std::min(1.0, std::max(0.0, rep.p_plus)));
  const double c = std::cos(0.5 * state.theta);
  rep.eof = binary_entropy(c * c);
  rep.h_diff = differential_entropy(m1z_hist);
  for (unsigned nu : nu_values) rep.h_nu.emplace_back(nu, discretized_entropy(m1z_hist, nu));
  return rep;
}

} // namespace bohm
