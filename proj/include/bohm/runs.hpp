#ifndef BOHM_RUNS_HPP
#define BOHM_RUNS_HPP

#include <string>
#include <vector>

#include "bohm/bell.hpp"
#include "bohm/dynamics.hpp"
#include "bohm/ensemble.hpp"
#include "bohm/entropy.hpp"
#include "bohm/state.hpp"

namespace bohm {

const char* library_version();

/// Everything a CLI-level computation needs.  The thread count is execution
/// metadata: it never appears in serialized output, which is byte-identical
/// for any worker count (the determinism contract).
struct RunConfig {
  PairStateParams state;
  SamplerKind sampler = SamplerKind::Grid;
  GridSpec grid;
  McSpec mc;
  double epsilon = 1e-3;
  double mu_max = 5.0;
  int threads = 0;
  PhysicalConstants constants;
};

struct RunOutput {
  std::string json;   // versioned result envelope
  std::string csv;    // tabular payload; empty if none
  bool invariants_ok = true;
};

RunOutput run_distribution(const RunConfig& config, Observable observable);
RunOutput run_correlation(const RunConfig& config);
RunOutput run_entropy(const RunConfig& config, const std::vector<unsigned>& nu_values);
RunOutput run_bell(const RunConfig& config, const PolarizerSetup& setup);
RunOutput run_trajectory(const RunConfig& config, const PairConfiguration& start,
                         const IntegratorSpec& integ, double dt_output);

/// Closed-form overlay for a distribution run, when the paper provides one for
/// this (observable, state) pair.
struct OverlayChoice {
  bool available = false;
  DistKind kind{};
  int eta = -1;
};
OverlayChoice overlay_for(Observable observable, const PairStateParams& state);

} // namespace bohm

#endif
