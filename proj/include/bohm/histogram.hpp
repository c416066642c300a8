#ifndef BOHM_HISTOGRAM_HPP
#define BOHM_HISTOGRAM_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "bohm/errors.hpp"

namespace bohm {

/// Binning layout.  Bins are half-open [left, right); mass outside
/// [mu_min, mu_max) is recorded per side, never silently dropped.
struct HistogramSpec {
  double mu_min = -5.0;
  double mu_max = 5.0;
  double epsilon = 1e-3;
};

class Histogram1D {
public:
  Histogram1D() = default;

  explicit Histogram1D(const HistogramSpec& spec) {
    if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon))
      throw DomainError("Histogram1D: bin width must be positive");
    if (!(spec.mu_max > spec.mu_min))
      throw DomainError("Histogram1D: mu_max must exceed mu_min");
    mu_min_ = spec.mu_min;
    epsilon_ = spec.epsilon;
    const double span = (spec.mu_max - spec.mu_min) / spec.epsilon;
    n_bins_ = static_cast<std::int64_t>(std::ceil(span - 1e-9));
    if (n_bins_ < 1) n_bins_ = 1;
    weights_.assign(static_cast<std::size_t>(n_bins_), 0.0);
  }

  void add(double x, double w) {
    total_weight_ += w;
    const double pos = (x - mu_min_) / epsilon_;
    if (pos < 0.0) {
      clipped_low_ += w;
      return;
    }
    const auto idx = static_cast<std::int64_t>(pos);
    if (idx >= n_bins_) {
      clipped_high_ += w;
      return;
    }
    weights_[static_cast<std::size_t>(idx)] += w;
  }

  std::int64_t bin_count() const { return n_bins_; }
  double mu_min() const { return mu_min_; }
  double mu_max() const { return mu_min_ + static_cast<double>(n_bins_) * epsilon_; }
  double epsilon() const { return epsilon_; }
  double bin_left(std::int64_t i) const { return mu_min_ + static_cast<double>(i) * epsilon_; }
  double bin_center(std::int64_t i) const { return mu_min_ + (static_cast<double>(i) + 0.5) * epsilon_; }

  double bin_weight(std::int64_t i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& weights() { return weights_; }

  double total_weight() const { return total_weight_; }
  double clipped_low() const { return clipped_low_; }
  double clipped_high() const { return clipped_high_; }
  double clipped_mass() const { return clipped_low_ + clipped_high_; }
  double clipped_fraction() const {
    return total_weight_ > 0.0 ? clipped_mass() / total_weight_ : 0.0;
  }

  /// Estimated density at bin i, Eq.-(24)-style ratio form: bin mass divided by
  /// total weight and bin width.
  double density(std::int64_t i) const {
    if (total_weight_ <= 0.0) throw EmptyEnsembleError("Histogram1D: no accumulated weight");
    return weights_[static_cast<std::size_t>(i)] / (total_weight_ * epsilon_);
  }

  void set_totals(double total, double low, double high) {
    total_weight_ = total;
    clipped_low_ = low;
    clipped_high_ = high;
  }

  /// Integrated density over [a, b), fractional at the boundary bins.
  double integrate_density(double a, double b) const {
    if (total_weight_ <= 0.0) throw EmptyEnsembleError("Histogram1D: no accumulated weight");
    if (b <= a) return 0.0;
    double mass = 0.0;
    for (std::int64_t i = 0; i < n_bins_; ++i) {
      const double lo = bin_left(i), hi = bin_left(i + 1);
      const double olo = std::max(a, lo), ohi = std::min(b, hi);
      if (ohi > olo) mass += weights_[static_cast<std::size_t>(i)] * (ohi - olo) / epsilon_;
    }
    return mass / total_weight_;
  }

private:
  double mu_min_ = 0.0;
  double epsilon_ = 1.0;
  std::int64_t n_bins_ = 0;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
  double clipped_low_ = 0.0;
  double clipped_high_ = 0.0;
};

} // namespace bohm

#endif
