#ifndef BOHM_ENSEMBLE_HPP
#define BOHM_ENSEMBLE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bohm/histogram.hpp"
#include "bohm/momenta.hpp"
#include "bohm/sampling.hpp"
#include "bohm/state.hpp"

namespace bohm {

/// Per-configuration scalars that can be histogrammed.  Names match the CLI
/// --observable values.
enum class Observable {
  M1x,
  M1z,
  M1zSq,     // M1z^2
  M2z,
  MLen,      // |M1|
  MLenSq,    // |M1|^2
  Mxy,       // xy-plane projection of M1
  M1xM2x,
  M1zM2z,
  NormProdZ, // M1z M2z / (|M1||M2|)
  CosPolar,  // M1z / |M1|
};

const char* observable_name(Observable obs);
std::optional<Observable> observable_from_name(const std::string& name);

struct HistogramRequest {
  Observable observable = Observable::M1z;
  HistogramSpec spec;
};

enum class SamplerKind { Grid, Mc };

struct EnsembleSpec {
  SamplerKind sampler = SamplerKind::Grid;
  GridSpec grid;
  McSpec mc;
  int threads = 0;             // 0: use hardware concurrency
  bool grid_error_pass = true; // grid sampler: run the halved grid for error bars
};

// Indices of the weighted sums accumulated in a single ensemble pass.
namespace scalar {
enum : int {
  kW = 0, // total weight
  kW2,    // sum of squared weights (effective sample size)
  kM1z,
  kM2z,
  kLen1,
  kLen2,
  kLen1Sq,
  kLen2Sq,
  kMxy1,
  kMxy2,
  kCosPhi,
  kCos2Phi,
  kCosAz,
  kSinAz,
  kCos2Az,
  kSin2Az,
  kM1DotM2,
  kDiffLenSq, // (|M1| - |M2|)^2
  kTxx, kTxy, kTxz,
  kTyx, kTyy, kTyz,
  kTzx, kTzy, kTzz, // <M1i M2j>
  kNxx, kNxy, kNxz,
  kNyx, kNyy, kNyz,
  kNzx, kNzy, kNzz, // <M1i M2j / (|M1||M2|)>
  kCount
};
} // namespace scalar

struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;
};

/// Result of one full sweep over the sample stream.  chunk_sums preserves the
/// fixed-shape partials that the deterministic reduction tree merged, and feeds
/// batch-means errors for Monte Carlo runs.
struct PassResult {
  std::array<double, scalar::kCount> sums{};
  std::vector<std::array<double, scalar::kCount>> chunk_sums;
  std::vector<Histogram1D> histograms;
  std::vector<std::vector<double>> hist_se; // per-bin batch-means errors (MC only)
  std::uint64_t n_evaluated = 0;
  std::uint64_t n_node_skipped = 0;
  std::uint64_t n_degenerate_az = 0;

  double mean(int id) const { return sums[id] / sums[scalar::kW]; }
};

/// Residual maxima from a deterministic audit subsample pushed through the
/// full point-evaluation path after each run.
struct InvariantMonitor {
  double max_mz_sum = 0.0;      // |M1z + M2z|
  double max_axis1 = 0.0;       // |e1.M1 - 1/2|
  double max_axis2 = 0.0;       // |e2.M2 - 1/2|
  double max_energy = 0.0;      // |kinetic + Q - E|
  double min_length = 1e300;    // min |Mi|
  std::uint64_t n_checked = 0;

  bool passed(double tol = 1e-10) const {
    return max_mz_sum <= tol && max_axis1 <= tol && max_axis2 <= tol &&
           max_energy <= tol && min_length >= 0.5 - tol;
  }
};

struct EnsembleSummary {
  PairStateParams state;
  PhysicalConstants constants;
  EnsembleSpec spec;
  std::vector<HistogramRequest> requests;

  PassResult full;
  std::optional<PassResult> half; // halved-grid pass (grid sampler only)
  std::vector<std::vector<double>> hist_std_error; // per request, per bin

  InvariantMonitor monitor;

  /// Ratio-form weighted mean of one accumulated scalar with its error:
  /// batch means over the reduction chunks for Monte Carlo, full-vs-half grid
  /// difference for grid quadrature.
  EstimatorResult average(int scalar_id) const;

  /// sqrt(<x^2> - <x>^2) with propagated error.
  EstimatorResult spread(int mean_id, int square_id) const;

  const Histogram1D& histogram(std::size_t request_index) const {
    return full.histograms.at(request_index);
  }
};

/// Run the fused sampling + accumulation pass.  Deterministic for a fixed spec
/// regardless of thread count: samples are split into a fixed number of
/// contiguous chunks, each chunk is accumulated sequentially in index order,
/// and chunk results are merged along a fixed binary tree.
EnsembleSummary run_ensemble(const PairStateParams& state, const EnsembleSpec& spec,
                             const std::vector<HistogramRequest>& requests,
                             const PhysicalConstants& constants = {});

/// .-- spec-shaped single-threaded estimators over explicit sample vectors.
/// Used by tests and by callers that hold small custom ensembles.
using SampleObservable =
    std::function<double(const PairConfiguration&, const ConfigurationReport&)>;

EstimatorResult estimate_average(const std::vector<WeightedSample>& samples,
                                 const SampleObservable& f, const PairStateParams& state,
                                 const PhysicalConstants& constants = {});

Histogram1D estimate_density(const std::vector<WeightedSample>& samples,
                             const SampleObservable& f, const HistogramSpec& hist_spec,
                             const PairStateParams& state,
                             const PhysicalConstants& constants = {});

struct TensorResult {
  std::array<std::array<double, 3>, 3> value{};
  std::array<std::array<double, 3>, 3> std_error{};
};

/// <M1i M2j> and the normalized tensor, plus the scalars extracted from them.
/// Bx and C_M use the xx element divided by cos(phi), switching to the yx
/// element / sin(phi) when cos(phi) is degenerate (they never vanish together).
struct CorrelationTensors {
  TensorResult raw;
  TensorResult normalized;
  EstimatorResult bx;
  EstimatorResult bz;
  EstimatorResult c_m;
};

CorrelationTensors correlation_tensor(const EnsembleSummary& summary);

struct AngleStatistics {
  EstimatorResult cos_big_phi;
  EstimatorResult delta_cos_big_phi;
  EstimatorResult cos_az;
  EstimatorResult sin_az;
  EstimatorResult delta_cos_az;
  EstimatorResult delta_sin_az;
  EstimatorResult c_b; // <cos(phi_rel - phi)>
};

AngleStatistics angle_statistics(const EnsembleSummary& summary);

/// Number of fixed reduction chunks (an algorithmic constant: changing it
/// changes rounding at the 1e-16 level, so it is part of the determinism
/// contract, not a tuning knob).
inline constexpr int kReductionChunks = 64;

} // namespace bohm

#endif
