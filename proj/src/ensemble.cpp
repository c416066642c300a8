#include "bohm/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <thread>

namespace bohm {

const char* observable_name(Observable obs) {
  switch (obs) {
    case Observable::M1x: return "m1x";
    case Observable::M1z: return "m1z";
    case Observable::M1zSq: return "m1z_sq";
    case Observable::M2z: return "m2z";
    case Observable::MLen: return "m_len";
    case Observable::MLenSq: return "m_len_sq";
    case Observable::Mxy: return "mxy";
    case Observable::M1xM2x: return "m1x_m2x";
    case Observable::M1zM2z: return "m1z_m2z";
    case Observable::NormProdZ: return "norm_prod_z";
    case Observable::CosPolar: return "cos_polar";
  }
  return "unknown";
}

std::optional<Observable> observable_from_name(const std::string& name) {
  static const std::pair<const char*, Observable> table[] = {
      {"m1x", Observable::M1x},         {"m1z", Observable::M1z},
      {"m1z_sq", Observable::M1zSq},
      {"m2z", Observable::M2z},         {"m_len", Observable::MLen},
      {"m_len_sq", Observable::MLenSq}, {"mxy", Observable::Mxy},
      {"m1x_m2x", Observable::M1xM2x},  {"m1z_m2z", Observable::M1zM2z},
      {"norm_prod_z", Observable::NormProdZ}, {"cos_polar", Observable::CosPolar},
  };
  for (const auto& [n, o] : table)
    if (name == n) return o;
  return std::nullopt;
}

namespace {

// Neumaier-compensated accumulator: sequential adds within a chunk stay
// accurate over ~1e7 terms without the cost of full pairwise recursion.
struct KSum {
  double s = 0.0;
  double c = 0.0;

  inline void add(double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct Point {
  double w;
  double m1x, m1y, m1z;
  double m2x, m2y, m2z;
  double l1sq, l2sq, l1, l2;
  double rho1, rho2;
  double inv_l1l2;
  double cos_big_phi, cos_az, sin_az;
  bool az_ok;
};

// Shared point kernel: guiding-wave bracket, phase gradient in closed form,
// momenta per rotor.  Returns false on a node.
inline bool eval_point(const StateCoeffs& k, double ch1, double sh1, double sa1,
                       double inv_sa1, double cot1, double ch2, double sh2, double sa2,
                       double inv_sa2, double cot2, double sb1, double cb1, double sb2,
                       double cb2, double cos_d, double sin_d, Point& pt) {
  const double p = k.c * ch1 * sh2;
  const double q = k.s * sh1 * ch2;
  const double g = p * p + q * q + 2.0 * p * q * cos_d;
  if (g <= kNodeThresholdW2) return false;
  const double inv_g = 1.0 / g;

  const double m1z = 0.5 * (p * p - q * q) * inv_g;
  const double t = k.cs_quarter * sin_d * inv_g;
  const double da1 = t * sa2;  // dS/d alpha1
  const double da2 = -t * sa1; // dS/d alpha2
  const double planar1 = 0.5 * inv_sa1 - cot1 * m1z;
  const double planar2 = 0.5 * inv_sa2 + cot2 * m1z;

  pt.w = g;
  pt.m1x = sb1 * planar1 - cb1 * da1;
  pt.m1y = sb1 * da1 + cb1 * planar1;
  pt.m1z = m1z;
  pt.m2x = sb2 * planar2 - cb2 * da2;
  pt.m2y = sb2 * da2 + cb2 * planar2;
  pt.m2z = -m1z;

  const double rho1sq = pt.m1x * pt.m1x + pt.m1y * pt.m1y;
  const double rho2sq = pt.m2x * pt.m2x + pt.m2y * pt.m2y;
  pt.l1sq = rho1sq + m1z * m1z;
  pt.l2sq = rho2sq + m1z * m1z;
  pt.l1 = std::sqrt(pt.l1sq);
  pt.l2 = std::sqrt(pt.l2sq);
  pt.inv_l1l2 = 1.0 / (pt.l1 * pt.l2);
  pt.rho1 = std::sqrt(rho1sq);
  pt.rho2 = std::sqrt(rho2sq);

  const double planar_dot = pt.m1x * pt.m2x + pt.m1y * pt.m2y;
  pt.cos_big_phi = (planar_dot + pt.m1z * pt.m2z) * pt.inv_l1l2;
  if (rho1sq < 1e-30 || rho2sq < 1e-30) {
    pt.az_ok = false;
    pt.cos_az = 0.0;
    pt.sin_az = 0.0;
  } else {
    pt.az_ok = true;
    const double inv_r = 1.0 / (pt.rho1 * pt.rho2);
    pt.cos_az = planar_dot * inv_r;
    pt.sin_az = (pt.m1y * pt.m2x - pt.m1x * pt.m2y) * inv_r;
  }
  return true;
}

inline double extract(Observable obs, const Point& pt) {
  switch (obs) {
    case Observable::M1x: return pt.m1x;
    case Observable::M1z: return pt.m1z;
    case Observable::M1zSq: return pt.m1z * pt.m1z;
    case Observable::M2z: return pt.m2z;
    case Observable::MLen: return pt.l1;
    case Observable::MLenSq: return pt.l1sq;
    case Observable::Mxy: return pt.rho1;
    case Observable::M1xM2x: return pt.m1x * pt.m2x;
    case Observable::M1zM2z: return pt.m1z * pt.m2z;
    case Observable::NormProdZ: return pt.m1z * pt.m2z * pt.inv_l1l2;
    case Observable::CosPolar: return pt.m1z / pt.l1;
  }
  return 0.0;
}

struct HistAccum {
  double mu_min;
  double inv_eps;
  std::int64_t n_bins;
  std::vector<double> w;
  double clip_low = 0.0;
  double clip_high = 0.0;

  explicit HistAccum(const Histogram1D& layout)
      : mu_min(layout.mu_min()), inv_eps(1.0 / layout.epsilon()), n_bins(layout.bin_count()),
        w(static_cast<std::size_t>(layout.bin_count()), 0.0) {}

  inline void add(double x, double weight) {
    const double pos = (x - mu_min) * inv_eps;
    if (pos < 0.0) {
      clip_low += weight;
      return;
    }
    const auto idx = static_cast<std::int64_t>(pos);
    if (idx >= n_bins) {
      clip_high += weight;
      return;
    }
    w[static_cast<std::size_t>(idx)] += weight;
  }
};

struct ChunkAccum {
  std::array<KSum, scalar::kCount> sums{};
  std::vector<HistAccum> hists;
  std::uint64_t n_evaluated = 0;
  std::uint64_t n_node = 0;
  std::uint64_t n_degen = 0;

  explicit ChunkAccum(const std::vector<Histogram1D>& layouts) {
    hists.reserve(layouts.size());
    for (const auto& l : layouts) hists.emplace_back(l);
  }

  inline void add_point(const Point& pt, const std::vector<HistogramRequest>& requests) {
    using namespace scalar;
    const double w = pt.w;
    sums[kW].add(w);
    sums[kW2].add(w * w);
    sums[kM1z].add(w * pt.m1z);
    sums[kM2z].add(w * pt.m2z);
    sums[kLen1].add(w * pt.l1);
    sums[kLen2].add(w * pt.l2);
    sums[kLen1Sq].add(w * pt.l1sq);
    sums[kLen2Sq].add(w * pt.l2sq);
    sums[kMxy1].add(w * pt.rho1);
    sums[kMxy2].add(w * pt.rho2);
    sums[kCosPhi].add(w * pt.cos_big_phi);
    sums[kCos2Phi].add(w * pt.cos_big_phi * pt.cos_big_phi);
    if (pt.az_ok) {
      sums[kCosAz].add(w * pt.cos_az);
      sums[kSinAz].add(w * pt.sin_az);
      sums[kCos2Az].add(w * pt.cos_az * pt.cos_az);
      sums[kSin2Az].add(w * pt.sin_az * pt.sin_az);
    } else {
      ++n_degen;
    }
    const double m1dotm2 = pt.m1x * pt.m2x + pt.m1y * pt.m2y + pt.m1z * pt.m2z;
    sums[kM1DotM2].add(w * m1dotm2);
    const double dl = pt.l1 - pt.l2;
    sums[kDiffLenSq].add(w * dl * dl);

    sums[kTxx].add(w * pt.m1x * pt.m2x);
    sums[kTxy].add(w * pt.m1x * pt.m2y);
    sums[kTxz].add(w * pt.m1x * pt.m2z);
    sums[kTyx].add(w * pt.m1y * pt.m2x);
    sums[kTyy].add(w * pt.m1y * pt.m2y);
    sums[kTyz].add(w * pt.m1y * pt.m2z);
    sums[kTzx].add(w * pt.m1z * pt.m2x);
    sums[kTzy].add(w * pt.m1z * pt.m2y);
    sums[kTzz].add(w * pt.m1z * pt.m2z);

    const double wn = w * pt.inv_l1l2;
    sums[kNxx].add(wn * pt.m1x * pt.m2x);
    sums[kNxy].add(wn * pt.m1x * pt.m2y);
    sums[kNxz].add(wn * pt.m1x * pt.m2z);
    sums[kNyx].add(wn * pt.m1y * pt.m2x);
    sums[kNyy].add(wn * pt.m1y * pt.m2y);
    sums[kNyz].add(wn * pt.m1y * pt.m2z);
    sums[kNzx].add(wn * pt.m1z * pt.m2x);
    sums[kNzy].add(wn * pt.m1z * pt.m2y);
    sums[kNzz].add(wn * pt.m1z * pt.m2z);

    for (std::size_t r = 0; r < hists.size(); ++r)
      hists[r].add(extract(requests[r].observable, pt), w);
  }
};

// Per-axis grid tables.  Half-angle values come from cos(alpha) exactly:
// cos(a/2) = sqrt((1+x)/2), sin(a/2) = sqrt((1-x)/2), sin(a) = 2 cos(a/2) sin(a/2).
struct AlphaTable {
  std::vector<double> ch, sh, sa, inv_sa, cot;

  AlphaTable(std::uint32_t n) {
    ch.resize(n);
    sh.resize(n);
    sa.resize(n);
    inv_sa.resize(n);
    cot.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const double x = grid_cos_alpha(i, n);
      ch[i] = std::sqrt(0.5 * (1.0 + x));
      sh[i] = std::sqrt(0.5 * (1.0 - x));
      sa[i] = 2.0 * ch[i] * sh[i];
      inv_sa[i] = 1.0 / sa[i];
      cot[i] = x * inv_sa[i];
    }
  }
};

struct BetaTable {
  std::vector<double> sb, cb;   // sin/cos of beta
  std::vector<double> sbf, cbf; // sin/cos of (beta - phi), rotor-2 fold for D

  BetaTable(std::uint32_t n, double phi) {
    sb.resize(n);
    cb.resize(n);
    sbf.resize(n);
    cbf.resize(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const double b = grid_beta(j, n);
      sb[j] = std::sin(b);
      cb[j] = std::cos(b);
      sbf[j] = std::sin(b - phi);
      cbf[j] = std::cos(b - phi);
    }
  }
};

void process_grid_chunk(const StateCoeffs& k, const GridSpec& g, const AlphaTable& a1,
                        const BetaTable& b1, const AlphaTable& a2, const BetaTable& b2,
                        std::uint64_t pair_lo, std::uint64_t pair_hi,
                        const std::vector<HistogramRequest>& requests, ChunkAccum& acc) {
  Point pt;
  for (std::uint64_t pair = pair_lo; pair < pair_hi; ++pair) {
    const auto i1 = static_cast<std::uint32_t>(pair / g.n_cos_alpha2);
    const auto i2 = static_cast<std::uint32_t>(pair % g.n_cos_alpha2);
    const double ch1 = a1.ch[i1], sh1 = a1.sh[i1], sa1 = a1.sa[i1];
    const double inv_sa1 = a1.inv_sa[i1], cot1 = a1.cot[i1];
    const double ch2 = a2.ch[i2], sh2 = a2.sh[i2], sa2 = a2.sa[i2];
    const double inv_sa2 = a2.inv_sa[i2], cot2 = a2.cot[i2];
    for (std::uint32_t j1 = 0; j1 < g.n_beta1; ++j1) {
      const double sb1 = b1.sb[j1], cb1 = b1.cb[j1];
      for (std::uint32_t j2 = 0; j2 < g.n_beta2; ++j2) {
        // D = beta1 - beta2 + phi = beta1 - (beta2 - phi)
        const double cos_d = cb1 * b2.cbf[j2] + sb1 * b2.sbf[j2];
        const double sin_d = sb1 * b2.cbf[j2] - cb1 * b2.sbf[j2];
        ++acc.n_evaluated;
        if (!eval_point(k, ch1, sh1, sa1, inv_sa1, cot1, ch2, sh2, sa2, inv_sa2, cot2,
                        sb1, cb1, b2.sb[j2], b2.cb[j2], cos_d, sin_d, pt)) {
          ++acc.n_node;
          continue;
        }
        acc.add_point(pt, requests);
      }
    }
  }
}

void process_mc_chunk(const PairStateParams& state, const StateCoeffs& k, const McSpec& mc,
                      double envelope, std::uint64_t lo, std::uint64_t hi,
                      const std::vector<HistogramRequest>& requests, ChunkAccum& acc) {
  Point pt;
  for (std::uint64_t i = lo; i < hi; ++i) {
    SplitMix64 rng(mc.seed, i);
    const PairConfiguration cfg = mc_draw(state, k, envelope, rng);
    const double x1 = std::cos(cfg.rotor1.alpha);
    const double x2 = std::cos(cfg.rotor2.alpha);
    const double ch1 = std::sqrt(0.5 * (1.0 + x1)), sh1 = std::sqrt(0.5 * (1.0 - x1));
    const double ch2 = std::sqrt(0.5 * (1.0 + x2)), sh2 = std::sqrt(0.5 * (1.0 - x2));
    const double sa1 = 2.0 * ch1 * sh1, sa2 = 2.0 * ch2 * sh2;
    const double d = cfg.rotor1.beta - cfg.rotor2.beta + state.phi;
    ++acc.n_evaluated;
    const bool ok = eval_point(k, ch1, sh1, sa1, 1.0 / sa1, x1 / sa1, ch2, sh2, sa2,
                               1.0 / sa2, x2 / sa2, std::sin(cfg.rotor1.beta),
                               std::cos(cfg.rotor1.beta), std::sin(cfg.rotor2.beta),
                               std::cos(cfg.rotor2.beta), std::cos(d), std::sin(d), pt);
    if (!ok) {
      ++acc.n_node; // unreachable: mc_draw never returns a node
      continue;
    }
    pt.w = 1.0; // accepted samples carry unit weight
    acc.add_point(pt, requests);
  }
}

std::vector<Histogram1D> make_layouts(const std::vector<HistogramRequest>& requests) {
  std::vector<Histogram1D> layouts;
  layouts.reserve(requests.size());
  for (const auto& r : requests) layouts.emplace_back(r.spec);
  return layouts;
}

PassResult run_pass(const PairStateParams& state, const EnsembleSpec& spec,
                    const GridSpec& grid, const std::vector<HistogramRequest>& requests) {
  const StateCoeffs k = StateCoeffs::from(state);
  const std::vector<Histogram1D> layouts = make_layouts(requests);

  unsigned n_threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());

  std::vector<ChunkAccum> chunks;
  chunks.reserve(kReductionChunks);
  for (int c = 0; c < kReductionChunks; ++c) chunks.emplace_back(layouts);

  const bool is_grid = spec.sampler == SamplerKind::Grid;
  std::uint64_t work_total; // grid: (i1,i2) pairs; mc: samples
  if (is_grid) {
    validate(grid);
    work_total = static_cast<std::uint64_t>(grid.n_cos_alpha1) * grid.n_cos_alpha2;
  } else {
    validate(spec.mc);
    work_total = spec.mc.n_samples;
  }

  struct GridTables {
    AlphaTable a1, a2;
    BetaTable b1, b2;
  };
  std::optional<GridTables> tables;
  double envelope = 0.0;
  if (is_grid) {
    tables.emplace(GridTables{AlphaTable(grid.n_cos_alpha1), AlphaTable(grid.n_cos_alpha2),
                              BetaTable(grid.n_beta1, 0.0), BetaTable(grid.n_beta2, state.phi)});
  } else {
    envelope = (k.c + k.s) * (k.c + k.s) * spec.mc.envelope_safety;
  }

  std::atomic<int> next_chunk{0};
  std::vector<std::exception_ptr> errors(n_threads);
  auto worker = [&](unsigned tid) {
    try {
      for (;;) {
        const int c = next_chunk.fetch_add(1);
        if (c >= kReductionChunks) break;
        const std::uint64_t lo = work_total * static_cast<std::uint64_t>(c) / kReductionChunks;
        const std::uint64_t hi =
            work_total * static_cast<std::uint64_t>(c + 1) / kReductionChunks;
        if (hi <= lo) continue;
        if (is_grid)
          process_grid_chunk(k, grid, tables->a1, tables->b1, tables->a2, tables->b2, lo, hi,
                             requests, chunks[static_cast<std::size_t>(c)]);
        else
          process_mc_chunk(state, k, spec.mc, envelope, lo, hi, requests,
                           chunks[static_cast<std::size_t>(c)]);
      }
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  };

  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  PassResult out;
  out.chunk_sums.resize(kReductionChunks);
  for (int c = 0; c < kReductionChunks; ++c)
    for (int i = 0; i < scalar::kCount; ++i)
      out.chunk_sums[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] =
          chunks[static_cast<std::size_t>(c)].sums[static_cast<std::size_t>(i)].value();

  // Monte Carlo per-bin errors by batch means over the chunks; must run before
  // the merge consumes the per-chunk histograms.
  if (!is_grid) {
    out.hist_se.resize(requests.size());
    for (std::size_t r = 0; r < requests.size(); ++r) {
      const std::size_t n_bins = chunks[0].hists[r].w.size();
      out.hist_se[r].assign(n_bins, 0.0);
      const double eps = layouts[r].epsilon();
      for (std::size_t bin = 0; bin < n_bins; ++bin) {
        double wsum = 0.0;
        for (int c = 0; c < kReductionChunks; ++c) wsum += out.chunk_sums[static_cast<std::size_t>(c)][scalar::kW];
        if (wsum <= 0.0) continue;
        double mean = 0.0;
        int k_used = 0;
        for (int c = 0; c < kReductionChunks; ++c) {
          const double cw = out.chunk_sums[static_cast<std::size_t>(c)][scalar::kW];
          if (cw <= 0.0) continue;
          mean += chunks[static_cast<std::size_t>(c)].hists[r].w[bin] / (cw * eps) * (cw / wsum);
          ++k_used;
        }
        double var = 0.0;
        for (int c = 0; c < kReductionChunks; ++c) {
          const double cw = out.chunk_sums[static_cast<std::size_t>(c)][scalar::kW];
          if (cw <= 0.0) continue;
          const double d = chunks[static_cast<std::size_t>(c)].hists[r].w[bin] / (cw * eps);
          const double f = cw / wsum;
          var += f * f * (d - mean) * (d - mean);
        }
        out.hist_se[r][bin] =
            k_used > 1 ? std::sqrt(var * static_cast<double>(k_used) / (k_used - 1.0)) : 0.0;
      }
    }
  }

  // Fixed binary reduction tree (stride doubling) over chunk partials: scalars,
  // histogram bins and clip masses alike.
  std::vector<std::array<double, scalar::kCount>> tree = out.chunk_sums;
  for (int step = 1; step < kReductionChunks; step *= 2) {
    for (int i = 0; i + step < kReductionChunks; i += 2 * step) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(i + step);
      for (int s = 0; s < scalar::kCount; ++s) tree[a][static_cast<std::size_t>(s)] += tree[b][static_cast<std::size_t>(s)];
      for (std::size_t r = 0; r < requests.size(); ++r) {
        auto& ha = chunks[a].hists[r];
        const auto& hb = chunks[b].hists[r];
        for (std::size_t bin = 0; bin < ha.w.size(); ++bin) ha.w[bin] += hb.w[bin];
        ha.clip_low += hb.clip_low;
        ha.clip_high += hb.clip_high;
      }
      chunks[a].n_evaluated += chunks[b].n_evaluated;
      chunks[a].n_node += chunks[b].n_node;
      chunks[a].n_degen += chunks[b].n_degen;
    }
  }
  out.sums = tree[0];
  out.n_evaluated = chunks[0].n_evaluated;
  out.n_node_skipped = chunks[0].n_node;
  out.n_degenerate_az = chunks[0].n_degen;

  out.histograms.reserve(requests.size());
  for (std::size_t r = 0; r < requests.size(); ++r) {
    Histogram1D h(requests[r].spec);
    h.weights() = std::move(chunks[0].hists[r].w);
    h.set_totals(out.sums[scalar::kW], chunks[0].hists[r].clip_low,
                 chunks[0].hists[r].clip_high);
    out.histograms.push_back(std::move(h));
  }
  if (out.sums[scalar::kW] <= 0.0)
    throw EmptyEnsembleError("run_ensemble: no sample carried positive weight");
  return out;
}

InvariantMonitor audit_invariants(const PairStateParams& state,
                                  const PhysicalConstants& consts) {
  InvariantMonitor mon;
  SplitMix64 rng(0x5eed0a0d17ULL ^ 0xd1b54a32d192ed03ULL);
  const double energy = consts.total_energy();
  while (mon.n_checked < 1000) {
    PairConfiguration cfg;
    cfg.rotor1 = {std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, kTwoPi),
                  rng.uniform(0.0, kFourPi)};
    cfg.rotor2 = {std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, kTwoPi),
                  rng.uniform(0.0, kFourPi)};
    const WaveTerms w = wave_terms(state, cfg);
    if (w.g < 1e-5) continue; // audit works at generic points away from nodes
    if (std::sin(cfg.rotor1.alpha) < kPoleThresholdSinAlpha ||
        std::sin(cfg.rotor2.alpha) < kPoleThresholdSinAlpha)
      continue;
    const MomentumPair mp = momentum_pair(state, cfg);
    const double kin = (dot(mp.m1, mp.m1) + dot(mp.m2, mp.m2)) / (2.0 * consts.inertia);
    const double qpot = energy - kin;
    mon.max_mz_sum = std::max(mon.max_mz_sum, std::fabs(mp.m1.z + mp.m2.z));
    mon.max_axis1 =
        std::max(mon.max_axis1, std::fabs(dot(principal_axis(cfg.rotor1), mp.m1) - 0.5));
    mon.max_axis2 =
        std::max(mon.max_axis2, std::fabs(dot(principal_axis(cfg.rotor2), mp.m2) - 0.5));
    mon.max_energy = std::max(mon.max_energy, std::fabs(kin + qpot - energy));
    mon.min_length = std::min({mon.min_length, norm(mp.m1), norm(mp.m2)});
    ++mon.n_checked;
  }
  return mon;
}

} // namespace

EnsembleSummary run_ensemble(const PairStateParams& state, const EnsembleSpec& spec,
                             const std::vector<HistogramRequest>& requests,
                             const PhysicalConstants& constants) {
  validate(state);
  validate(constants);

  EnsembleSummary summary;
  summary.state = state;
  summary.constants = constants;
  summary.spec = spec;
  summary.requests = requests;
  summary.full = run_pass(state, spec, spec.grid, requests);

  if (spec.sampler == SamplerKind::Grid && spec.grid_error_pass)
    summary.half = run_pass(state, spec, spec.grid.halved(), requests);

  // Per-bin density errors: grid runs use the full-vs-half difference, Monte
  // Carlo runs batch means over the reduction chunks.
  summary.hist_std_error.resize(requests.size());
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Histogram1D& h = summary.full.histograms[r];
    auto& se = summary.hist_std_error[r];
    se.assign(static_cast<std::size_t>(h.bin_count()), 0.0);
    if (summary.half) {
      const Histogram1D& hh = summary.half->histograms[r];
      for (std::int64_t b = 0; b < h.bin_count(); ++b)
        se[static_cast<std::size_t>(b)] = std::fabs(h.density(b) - hh.density(b));
    } else if (!summary.full.hist_se.empty()) {
      se = summary.full.hist_se[r];
    }
  }

  summary.monitor = audit_invariants(state, constants);
  return summary;
}

EstimatorResult EnsembleSummary::average(int scalar_id) const {
  EstimatorResult r;
  const double w = full.sums[scalar::kW];
  r.value = full.sums[static_cast<std::size_t>(scalar_id)] / w;
  r.n_effective = w * w / full.sums[scalar::kW2];
  if (spec.sampler == SamplerKind::Mc) {
    // Batch means over the fixed reduction chunks.
    double var = 0.0;
    int k = 0;
    for (const auto& c : full.chunk_sums) {
      const double cw = c[scalar::kW];
      if (cw <= 0.0) continue;
      const double m = c[static_cast<std::size_t>(scalar_id)] / cw;
      const double f = cw / w;
      var += f * f * (m - r.value) * (m - r.value);
      ++k;
    }
    r.std_error = k > 1 ? std::sqrt(var * static_cast<double>(k) / static_cast<double>(k - 1))
                        : 0.0;
  } else if (half) {
    const double vh =
        half->sums[static_cast<std::size_t>(scalar_id)] / half->sums[scalar::kW];
    r.std_error = std::fabs(r.value - vh);
  }
  return r;
}

EstimatorResult EnsembleSummary::spread(int mean_id, int square_id) const {
  const EstimatorResult m = average(mean_id);
  const EstimatorResult m2 = average(square_id);
  EstimatorResult r;
  const double var = std::max(0.0, m2.value - m.value * m.value);
  r.value = std::sqrt(var);
  r.n_effective = m.n_effective;
  const double se_var =
      std::sqrt(m2.std_error * m2.std_error +
                4.0 * m.value * m.value * m.std_error * m.std_error);
  r.std_error = r.value > 1e-12 ? 0.5 * se_var / r.value : std::sqrt(se_var);
  return r;
}

CorrelationTensors correlation_tensor(const EnsembleSummary& summary) {
  CorrelationTensors out;
  const int raw0 = scalar::kTxx;
  const int norm0 = scalar::kNxx;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      EstimatorResult r = summary.average(raw0 + 3 * i + j);
      out.raw.value[ii][jj] = r.value;
      out.raw.std_error[ii][jj] = r.std_error;
      EstimatorResult n = summary.average(norm0 + 3 * i + j);
      out.normalized.value[ii][jj] = n.value;
      out.normalized.std_error[ii][jj] = n.std_error;
    }

  const double cos_phi = std::cos(summary.state.phi);
  const double sin_phi = std::sin(summary.state.phi);
  if (std::fabs(cos_phi) < 1e-6 && std::fabs(sin_phi) < 1e-6)
    throw IllConditionedExtractionError(
        "correlation_tensor: cos(phi) and sin(phi) both degenerate");

  const bool use_xx = std::fabs(cos_phi) >= std::fabs(sin_phi);
  const EstimatorResult n_el = summary.average(use_xx ? scalar::kNxx : scalar::kNyx);
  const double denom = use_xx ? cos_phi : sin_phi;
  out.bx = {3.0 * n_el.value / denom, 3.0 * n_el.std_error / std::fabs(denom),
            n_el.n_effective};
  const EstimatorResult nzz = summary.average(scalar::kNzz);
  out.bz = {-3.0 * nzz.value, 3.0 * nzz.std_error, nzz.n_effective};
  const EstimatorResult t_el = summary.average(use_xx ? scalar::kTxx : scalar::kTyx);
  out.c_m = {6.0 * t_el.value / denom, 6.0 * t_el.std_error / std::fabs(denom),
             t_el.n_effective};
  return out;
}

AngleStatistics angle_statistics(const EnsembleSummary& summary) {
  AngleStatistics out;
  out.cos_big_phi = summary.average(scalar::kCosPhi);
  out.delta_cos_big_phi = summary.spread(scalar::kCosPhi, scalar::kCos2Phi);
  out.cos_az = summary.average(scalar::kCosAz);
  out.sin_az = summary.average(scalar::kSinAz);
  out.delta_cos_az = summary.spread(scalar::kCosAz, scalar::kCos2Az);
  out.delta_sin_az = summary.spread(scalar::kSinAz, scalar::kSin2Az);
  const double cp = std::cos(summary.state.phi), sp = std::sin(summary.state.phi);
  out.c_b.value = out.cos_az.value * cp + out.sin_az.value * sp;
  out.c_b.std_error = std::sqrt(cp * cp * out.cos_az.std_error * out.cos_az.std_error +
                                sp * sp * out.sin_az.std_error * out.sin_az.std_error);
  out.c_b.n_effective = out.cos_az.n_effective;
  return out;
}

EstimatorResult estimate_average(const std::vector<WeightedSample>& samples,
                                 const SampleObservable& f, const PairStateParams& state,
                                 const PhysicalConstants& constants) {
  KSum sw, swx, sw2;
  for (const auto& s : samples) {
    if (s.weight <= 0.0) continue;
    const ConfigurationReport rep = configuration_report(state, s.cfg, constants);
    sw.add(s.weight);
    sw2.add(s.weight * s.weight);
    swx.add(s.weight * f(s.cfg, rep));
  }
  if (sw.value() <= 0.0)
    throw EmptyEnsembleError("estimate_average: no sample carried positive weight");
  EstimatorResult r;
  r.value = swx.value() / sw.value();
  r.n_effective = sw.value() * sw.value() / sw2.value();
  r.std_error = 0.0; // callers needing errors use run_ensemble
  return r;
}

Histogram1D estimate_density(const std::vector<WeightedSample>& samples,
                             const SampleObservable& f, const HistogramSpec& hist_spec,
                             const PairStateParams& state,
                             const PhysicalConstants& constants) {
  Histogram1D h(hist_spec);
  for (const auto& s : samples) {
    if (s.weight <= 0.0) continue;
    const ConfigurationReport rep = configuration_report(state, s.cfg, constants);
    h.add(f(s.cfg, rep), s.weight);
  }
  if (h.total_weight() <= 0.0)
    throw EmptyEnsembleError("estimate_density: no sample carried positive weight");
  return h;
}

} // namespace bohm
