#ifndef BOHM_ORACLES_HPP
#define BOHM_ORACLES_HPP

#include <array>
#include <string>
#include <vector>

#include "bohm/angles.hpp"
#include "bohm/state.hpp"

namespace bohm {

/// The closed-form hidden-variable distributions.  "ProductState" forms hold at
/// theta = 0, "MaxEnt" forms at theta = pi/2; MomentumLength(Sq) is
/// theta-independent.
enum class DistKind {
  MomentumLength,          // dP/d|M1| = Theta(mu - 1/2) / (4 mu^5)
  MomentumLengthSq,        // dP/dmu = Theta(mu - 1/4) (2 mu)^-3
  M1xProductState,         // (3/2)(1 + 4 mu^2)^{-5/2}
  MxyProductState,         // 16 mu (1 + 4 mu^2)^{-3}
  CosPolarMaxEnt,          // 1/2 on [-1, 1]
  M1zMaxEnt,               // (4/5) min(1, |2 mu|^{-5})
  M1zSqMaxEnt,             // (8/5) min[(4 mu)^{-1/2}, (4 mu)^{-3}]
  MxyMaxEnt,               // (2 / 15 mu^5)[1 - Theta(1/2 - mu)(1 + 2mu^2 + 6mu^4) sqrt(1-4mu^2)]
  ProductZMaxEnt,          // (8/5) min[(4 eta mu)^{-1/2}, (4 eta mu)^{-3}]
  NormalizedProductMaxEnt, // (4 eta mu)^{-1/2}
};

/// Closed-form density with exact bin averages.  Construction self-integrates
/// the form and refuses to exist unless the total mass is 1 to 1e-8, which
/// guards against transcription slips.
class AnalyticDistribution {
public:
  /// eta = -1 selects the singlet-signed product forms, +1 the triplet-signed
  /// ones; ignored by the kinds that do not carry it.
  static AnalyticDistribution make(DistKind kind, int eta = -1);

  DistKind kind() const { return kind_; }
  int eta() const { return eta_; }

  /// Density value at mu.  Throws DomainError where the variable itself cannot
  /// live (negative lengths or squares, |normalized product| > 1).
  double pdf(double mu) const;

  /// Probability mass of [a, b].
  double mass(double a, double b) const;

  /// Mean density over a bin [a, b]: the quantity a histogram estimates.
  double bin_average(double a, double b) const;

  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  /// Locations where the density jumps, kinks or diverges (includes singular
  /// support endpoints).  Histogram comparisons exclude neighborhoods of these.
  const std::vector<double>& nonsmooth_points() const { return nonsmooth_; }

  double mean() const;
  double second_moment() const;

private:
  AnalyticDistribution(DistKind kind, int eta);
  double cdf(double mu) const;

  DistKind kind_;
  int eta_;
  double support_min_, support_max_;
  std::vector<double> nonsmooth_;
};

/// Standard quantum-mechanical reference values for the pair state.
struct QmCorrelators {
  Vec3 spin_expectation;                          // <S1> = -<S2>
  std::array<std::array<double, 3>, 3> spin_tensor; // <S1i S2j>
  double s1_dot_s2;                               // (2 sin th cos ph - 1)/4
  double eof_bits;                                // binary entropy of cos^2(th/2)
};

QmCorrelators qm_reference(const PairStateParams& state);

/// Relations proven at theta = pi/2 only: the Bohmian tensor is exactly 2/3 of
/// the quantum one, and the momentum correlators follow.
struct BohmianReference {
  std::array<std::array<double, 3>, 3> tensor; // predicted <M1i M2j>
  double m1_dot_m2;                            // (2/3) <S1.S2>
  double sum_sq;                               // <(M1+M2)^2> = (2/3) <(S1+S2)^2>
};

BohmianReference bohmian_reference_ratios(const PairStateParams& state);

} // namespace bohm

#endif
