#ifndef BOHM_ENTROPY_HPP
#define BOHM_ENTROPY_HPP

#include <utility>
#include <vector>

#include "bohm/histogram.hpp"
#include "bohm/state.hpp"

namespace bohm {

/// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.  Entropies are in bits
/// throughout the library.
double binary_entropy(double p);

/// Probability that M1z >= 0 from its histogram: integrated density above zero
/// with the straddling bin split proportionally, plus any clipped upper mass.
double hemisphere_probability(const Histogram1D& hist);

/// Plug-in differential entropy -sum p_i log2(p_i) eps over occupied bins.
/// Refuses histograms that clipped more than max_clipped_fraction of the mass.
double differential_entropy(const Histogram1D& hist, double max_clipped_fraction = 1e-3);

/// Shannon entropy of the distribution coarsened to bins of width 2^-nu.
/// The histogram must be refinable: its bin width has to divide 2^-nu and its
/// origin must sit on the coarse lattice.
double discretized_entropy(const Histogram1D& hist, unsigned nu);

struct EntropyReport {
  double p_plus = 0.0;
  double h_binary_pm = 0.0; ///< binary entropy of (p_plus, 1 - p_plus)
  double eof = 0.0;         ///< entanglement of formation of the state
  double h_diff = 0.0;      ///< differential entropy of M1z
  std::vector<std::pair<unsigned, double>> h_nu;
};

/// Assemble the full entropy picture from a histogram of M1z.
EntropyReport entropy_report(const PairStateParams& state, const Histogram1D& m1z_hist,
                             const std::vector<unsigned>& nu_values);

} // namespace bohm

#endif
