#include "bohm/runs.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bohm/oracles.hpp"

namespace bohm {

using nlohmann::json;

const char* library_version() {
#ifdef BOHMPAIR_VERSION
  return BOHMPAIR_VERSION;
#else
  return "0.0.0";
#endif
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json config_json(const RunConfig& c) {
  json j;
  j["theta"] = c.state.theta;
  j["phi"] = c.state.phi;
  j["sampler"] = c.sampler == SamplerKind::Grid ? "grid" : "mc";
  j["grid"] = {c.grid.n_cos_alpha1, c.grid.n_beta1, c.grid.n_cos_alpha2, c.grid.n_beta2};
  j["n_samples"] = c.mc.n_samples;
  j["seed"] = c.mc.seed;
  j["envelope_safety"] = c.mc.envelope_safety;
  j["epsilon"] = c.epsilon;
  j["mu_max"] = c.mu_max;
  j["inertia"] = c.constants.inertia;
  return j;
}

json envelope(const char* command, const RunConfig& c) {
  json j;
  j["schema"] = "bohmpair-result/1";
  j["version"] = library_version();
  j["command"] = command;
  j["config"] = config_json(c);
  return j;
}

json monitor_json(const InvariantMonitor& m) {
  json j;
  j["max_abs_m1z_plus_m2z"] = m.max_mz_sum;
  j["max_abs_e1_dot_m1_minus_half"] = m.max_axis1;
  j["max_abs_e2_dot_m2_minus_half"] = m.max_axis2;
  j["max_abs_energy_residual"] = m.max_energy;
  j["min_momentum_length"] = m.min_length;
  j["n_checked"] = m.n_checked;
  j["passed"] = m.passed();
  return j;
}

json counters_json(const PassResult& p) {
  json j;
  j["n_evaluated"] = p.n_evaluated;
  j["n_node_skipped"] = p.n_node_skipped;
  j["n_degenerate_az"] = p.n_degenerate_az;
  return j;
}

json estimator_json(const EstimatorResult& e) {
  return json{{"value", e.value}, {"std_error", e.std_error}, {"n_effective", e.n_effective}};
}

json tensor_json(const TensorResult& t) {
  json v = json::array(), s = json::array();
  for (int i = 0; i < 3; ++i) {
    json rv = json::array(), rs = json::array();
    for (int j = 0; j < 3; ++j) {
      rv.push_back(t.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      rs.push_back(t.std_error[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    v.push_back(rv);
    s.push_back(rs);
  }
  return json{{"value", v}, {"std_error", s}};
}

EnsembleSpec ensemble_spec(const RunConfig& c) {
  EnsembleSpec spec;
  spec.sampler = c.sampler;
  spec.grid = c.grid;
  spec.mc = c.mc;
  spec.threads = c.threads;
  return spec;
}

HistogramSpec histogram_spec_for(Observable obs, const RunConfig& c) {
  HistogramSpec h;
  h.epsilon = c.epsilon;
  switch (obs) {
    case Observable::MLen:
    case Observable::MLenSq:
    case Observable::Mxy:
    case Observable::M1zSq:
      h.mu_min = 0.0;
      h.mu_max = c.mu_max;
      break;
    case Observable::NormProdZ:
    case Observable::CosPolar:
      h.mu_min = -1.0;
      h.mu_max = 1.0;
      break;
    default:
      h.mu_min = -c.mu_max;
      h.mu_max = c.mu_max;
      break;
  }
  return h;
}

/// Scalar accumulator that estimates the mean of a histogrammed observable,
/// where one exists; -1 otherwise (the histogram mean is used instead).
int scalar_for(Observable obs) {
  switch (obs) {
    case Observable::M1z: return scalar::kM1z;
    case Observable::M2z: return scalar::kM2z;
    case Observable::MLen: return scalar::kLen1;
    case Observable::MLenSq: return scalar::kLen1Sq;
    case Observable::Mxy: return scalar::kMxy1;
    case Observable::M1xM2x: return scalar::kTxx;
    case Observable::M1zM2z: return scalar::kTzz;
    case Observable::NormProdZ: return scalar::kNzz;
    default: return -1;
  }
}

double histogram_mean(const Histogram1D& h) {
  double m = 0.0;
  for (std::int64_t i = 0; i < h.bin_count(); ++i)
    m += h.bin_center(i) * h.bin_weight(i);
  return m / h.total_weight();
}

std::string csv_provenance(const char* command, const RunConfig& c) {
  std::ostringstream os;
  os << "# bohmpair " << library_version() << " schema=bohmpair-result/1 command=" << command
     << "\n";
  os << "# theta=" << num(c.state.theta) << " phi=" << num(c.state.phi)
     << " sampler=" << (c.sampler == SamplerKind::Grid ? "grid" : "mc") << " grid="
     << c.grid.n_cos_alpha1 << "x" << c.grid.n_beta1 << "x" << c.grid.n_cos_alpha2 << "x"
     << c.grid.n_beta2 << " n_samples=" << c.mc.n_samples << " seed=" << c.mc.seed
     << " epsilon=" << num(c.epsilon) << " mu_max=" << num(c.mu_max)
     << " inertia=" << num(c.constants.inertia) << "\n";
  return os.str();
}

} // namespace

OverlayChoice overlay_for(Observable observable, const PairStateParams& state) {
  const bool product_state = std::fabs(state.theta) < 1e-9;
  const bool max_ent = std::fabs(state.theta - 0.5 * kPi) < 1e-9;
  const bool singlet_phase = std::fabs(state.phi - kPi) < 1e-9;
  const bool triplet_phase = std::fabs(state.phi) < 1e-9 ||
                             std::fabs(state.phi - kTwoPi) < 1e-9;
  OverlayChoice o;
  switch (observable) {
    case Observable::MLen:
      o = {true, DistKind::MomentumLength, -1};
      break;
    case Observable::MLenSq:
      o = {true, DistKind::MomentumLengthSq, -1};
      break;
    case Observable::M1x:
      if (product_state) o = {true, DistKind::M1xProductState, -1};
      else if (max_ent) o = {true, DistKind::M1zMaxEnt, -1}; // isotropic at theta = pi/2
      break;
    case Observable::Mxy:
      if (product_state) o = {true, DistKind::MxyProductState, -1};
      else if (max_ent) o = {true, DistKind::MxyMaxEnt, -1};
      break;
    case Observable::M1z:
    case Observable::M2z:
      if (max_ent) o = {true, DistKind::M1zMaxEnt, -1};
      break;
    case Observable::M1zSq:
      if (max_ent) o = {true, DistKind::M1zSqMaxEnt, -1};
      break;
    case Observable::M1zM2z:
      if (max_ent) o = {true, DistKind::ProductZMaxEnt, -1};
      break;
    case Observable::M1xM2x:
      if (max_ent && singlet_phase) o = {true, DistKind::ProductZMaxEnt, -1};
      else if (max_ent && triplet_phase) o = {true, DistKind::ProductZMaxEnt, +1};
      break;
    case Observable::NormProdZ:
      if (max_ent) o = {true, DistKind::NormalizedProductMaxEnt, -1};
      break;
    case Observable::CosPolar:
      if (max_ent) o = {true, DistKind::CosPolarMaxEnt, -1};
      break;
  }
  return o;
}

RunOutput run_distribution(const RunConfig& config, Observable observable) {
  std::vector<HistogramRequest> requests{{observable, histogram_spec_for(observable, config)}};
  const EnsembleSummary summary =
      run_ensemble(config.state, ensemble_spec(config), requests, config.constants);
  const Histogram1D& h = summary.histogram(0);
  const std::vector<double>& se = summary.hist_std_error[0];

  OverlayChoice overlay = overlay_for(observable, config.state);
  std::vector<double> analytic;
  if (overlay.available) {
    const AnalyticDistribution dist = AnalyticDistribution::make(overlay.kind, overlay.eta);
    analytic.resize(static_cast<std::size_t>(h.bin_count()));
    for (std::int64_t i = 0; i < h.bin_count(); ++i) {
      double a = h.bin_left(i), b = h.bin_left(i + 1);
      // Clip to where the variable lives so pdf() cannot be asked off-domain.
      a = std::max(a, dist.support_min() < -1e300 ? a : dist.support_min());
      analytic[static_cast<std::size_t>(i)] = dist.mass(a, b) / h.epsilon();
    }
  }

  const int sid = scalar_for(observable);
  const EstimatorResult mean =
      sid >= 0 ? summary.average(sid)
               : EstimatorResult{histogram_mean(h), 0.0,
                                 summary.average(scalar::kW2).n_effective};

  json j = envelope("dist", config);
  j["invariants"] = monitor_json(summary.monitor);
  j["counters"] = counters_json(summary.full);
  json r;
  r["observable"] = observable_name(observable);
  r["mean"] = estimator_json(mean);
  json hist;
  hist["mu_min"] = h.mu_min();
  hist["mu_max"] = h.mu_max();
  hist["epsilon"] = h.epsilon();
  hist["n_bins"] = h.bin_count();
  hist["total_weight"] = h.total_weight();
  hist["clipped_low_fraction"] = h.clipped_low() / h.total_weight();
  hist["clipped_high_fraction"] = h.clipped_high() / h.total_weight();
  json dens = json::array(), errs = json::array();
  for (std::int64_t i = 0; i < h.bin_count(); ++i) {
    dens.push_back(h.density(i));
    errs.push_back(se[static_cast<std::size_t>(i)]);
  }
  hist["density"] = dens;
  hist["std_error"] = errs;
  r["histogram"] = hist;
  if (overlay.available) {
    r["analytic"] = {{"kind", static_cast<int>(overlay.kind)},
                     {"eta", overlay.eta},
                     {"bin_average", analytic}};
  }
  j["results"] = r;

  std::ostringstream csv;
  csv << csv_provenance("dist", config);
  csv << "# observable=" << observable_name(observable) << "\n";
  csv << "mu,density,std_error";
  if (overlay.available) csv << ",analytic";
  csv << "\n";
  for (std::int64_t i = 0; i < h.bin_count(); ++i) {
    csv << num(h.bin_center(i)) << "," << num(h.density(i)) << ","
        << num(se[static_cast<std::size_t>(i)]);
    if (overlay.available) csv << "," << num(analytic[static_cast<std::size_t>(i)]);
    csv << "\n";
  }

  RunOutput out;
  out.json = j.dump(2);
  out.csv = csv.str();
  out.invariants_ok = summary.monitor.passed();
  return out;
}

RunOutput run_correlation(const RunConfig& config) {
  const EnsembleSummary summary =
      run_ensemble(config.state, ensemble_spec(config), {}, config.constants);
  const CorrelationTensors tensors = correlation_tensor(summary);
  const AngleStatistics angles = angle_statistics(summary);
  const QmCorrelators qm = qm_reference(config.state);

  json j = envelope("corr", config);
  j["invariants"] = monitor_json(summary.monitor);
  j["counters"] = counters_json(summary.full);
  json r;
  r["tensor"] = tensor_json(tensors.raw);
  r["normalized_tensor"] = tensor_json(tensors.normalized);
  r["bx"] = estimator_json(tensors.bx);
  r["bz"] = estimator_json(tensors.bz);
  r["c_m"] = estimator_json(tensors.c_m);
  r["c_b"] = estimator_json(angles.c_b);
  r["cos_big_phi"] = estimator_json(angles.cos_big_phi);
  r["delta_cos_big_phi"] = estimator_json(angles.delta_cos_big_phi);
  r["cos_az"] = estimator_json(angles.cos_az);
  r["sin_az"] = estimator_json(angles.sin_az);
  r["delta_cos_az"] = estimator_json(angles.delta_cos_az);
  r["delta_sin_az"] = estimator_json(angles.delta_sin_az);
  r["mean_m1z"] = estimator_json(summary.average(scalar::kM1z));
  r["mean_m2z"] = estimator_json(summary.average(scalar::kM2z));
  r["mean_len1_sq"] = estimator_json(summary.average(scalar::kLen1Sq));
  r["mean_len2_sq"] = estimator_json(summary.average(scalar::kLen2Sq));
  r["mean_mxy1"] = estimator_json(summary.average(scalar::kMxy1));
  r["mean_m1_dot_m2"] = estimator_json(summary.average(scalar::kM1DotM2));
  r["mean_diff_len_sq"] = estimator_json(summary.average(scalar::kDiffLenSq));

  const EstimatorResult len_sum = summary.average(scalar::kLen1Sq);
  const EstimatorResult len_sum2 = summary.average(scalar::kLen2Sq);
  const double inv_2i = 1.0 / (2.0 * config.constants.inertia);
  const double kinetic = (len_sum.value + len_sum2.value) * inv_2i;
  const double kin_se = (len_sum.std_error + len_sum2.std_error) * inv_2i;
  r["mean_kinetic"] = {{"value", kinetic}, {"std_error", kin_se}};
  r["mean_qpot"] = {{"value", config.constants.total_energy() - kinetic},
                    {"std_error", kin_se}};
  const EstimatorResult dot = summary.average(scalar::kM1DotM2);
  r["mean_sum_sq"] = {{"value", len_sum.value + len_sum2.value + 2.0 * dot.value},
                      {"std_error", len_sum.std_error + len_sum2.std_error +
                                        2.0 * dot.std_error}};

  json qmj;
  qmj["spin_expectation"] = {qm.spin_expectation.x, qm.spin_expectation.y,
                             qm.spin_expectation.z};
  json qt = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int k = 0; k < 3; ++k)
      row.push_back(qm.spin_tensor[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    qt.push_back(row);
  }
  qmj["spin_tensor"] = qt;
  qmj["s1_dot_s2"] = qm.s1_dot_s2;
  qmj["eof_bits"] = qm.eof_bits;
  r["qm_reference"] = qmj;

  // Bohmian / quantum ratio where the quantum element is nonzero (the 2/3
  // diagnostics of the maximally entangled regime).
  json ratio = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int k = 0; k < 3; ++k) {
      const double q =
          qm.spin_tensor[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (std::fabs(q) > 1e-12)
        row.push_back(tensors.raw.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] / q);
      else
        row.push_back(nullptr);
    }
    ratio.push_back(row);
  }
  r["tensor_over_qm"] = ratio;
  j["results"] = r;

  std::ostringstream csv;
  csv << csv_provenance("corr", config);
  csv << "theta,phi,txx,txy,tyx,tyy,tzz,nxx,nxy,nyx,nyy,nzz,bx,bz,c_m,c_b,cos_big_phi,"
         "delta_cos_big_phi,mean_m1z,mean_len1_sq,mean_kinetic,mean_qpot\n";
  csv << num(config.state.theta) << "," << num(config.state.phi);
  const auto& T = tensors.raw.value;
  const auto& N = tensors.normalized.value;
  for (double v : {T[0][0], T[0][1], T[1][0], T[1][1], T[2][2], N[0][0], N[0][1], N[1][0],
                   N[1][1], N[2][2], tensors.bx.value, tensors.bz.value, tensors.c_m.value,
                   angles.c_b.value, angles.cos_big_phi.value,
                   angles.delta_cos_big_phi.value, summary.average(scalar::kM1z).value,
                   len_sum.value, kinetic, config.constants.total_energy() - kinetic})
    csv << "," << num(v);
  csv << "\n";

  RunOutput out;
  out.json = j.dump(2);
  out.csv = csv.str();
  out.invariants_ok = summary.monitor.passed();
  return out;
}

RunOutput run_entropy(const RunConfig& config, const std::vector<unsigned>& nu_values) {
  // Power-of-two bin width not larger than the requested epsilon, on an
  // integer-aligned range, so every requested 2^-nu coarsening is exact.
  const double eps = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(config.epsilon))));
  const double lim = std::max(1.0, std::ceil(config.mu_max));
  RunConfig cfg = config;
  cfg.epsilon = eps;
  HistogramSpec hs{-lim, lim, eps};
  std::vector<HistogramRequest> requests{{Observable::M1z, hs}};
  const EnsembleSummary summary =
      run_ensemble(cfg.state, ensemble_spec(cfg), requests, cfg.constants);
  const EntropyReport rep = entropy_report(cfg.state, summary.histogram(0), nu_values);

  json j = envelope("entropy", cfg);
  j["invariants"] = monitor_json(summary.monitor);
  j["counters"] = counters_json(summary.full);
  json r;
  r["p_plus"] = rep.p_plus;
  r["h_binary_pm"] = rep.h_binary_pm;
  r["eof_bits"] = rep.eof;
  r["h_diff"] = rep.h_diff;
  r["volume_2h"] = std::exp2(rep.h_diff);
  json hn = json::array();
  for (auto [nu, hval] : rep.h_nu)
    hn.push_back({{"nu", nu}, {"h_nu", hval}, {"h_nu_minus_nu", hval - nu}});
  r["h_nu"] = hn;
  r["p1"] = std::cos(0.5 * cfg.state.theta) * std::cos(0.5 * cfg.state.theta);
  j["results"] = r;

  std::ostringstream csv;
  csv << csv_provenance("entropy", cfg);
  csv << "p1,p_plus,h_binary_pm,eof_bits,h_diff";
  for (auto [nu, hval] : rep.h_nu) {
    (void)hval;
    csv << ",h_nu_" << nu;
  }
  csv << "\n";
  csv << num(std::cos(0.5 * cfg.state.theta) * std::cos(0.5 * cfg.state.theta)) << ","
      << num(rep.p_plus) << "," << num(rep.h_binary_pm) << "," << num(rep.eof) << ","
      << num(rep.h_diff);
  for (auto [nu, hval] : rep.h_nu) {
    (void)nu;
    csv << "," << num(hval);
  }
  csv << "\n";

  RunOutput out;
  out.json = j.dump(2);
  out.csv = csv.str();
  out.invariants_ok = summary.monitor.passed();
  return out;
}

RunOutput run_bell(const RunConfig& config, const PolarizerSetup& setup) {
  validate(setup);
  const EnsembleSummary summary =
      run_ensemble(config.state, ensemble_spec(config), {}, config.constants);
  const CorrelationTensors tensors = correlation_tensor(summary);

  auto cq = [&](const Vec3& a, const Vec3& b) { return qm_correlator(config.state, a, b); };
  auto cb = [&](const Vec3& a, const Vec3& b) { return bohm_correlator(tensors, a, b); };

  const double chsh_qm = chsh_value(setup, cq);
  double chsh_b = 0.0, chsh_b_se = 0.0;
  {
    const EstimatorResult ab = cb(setup.a, setup.b);
    const EstimatorResult abp = cb(setup.a, setup.b_prime);
    const EstimatorResult apb = cb(setup.a_prime, setup.b);
    const EstimatorResult apbp = cb(setup.a_prime, setup.b_prime);
    chsh_b = std::fabs(ab.value + abp.value + apb.value - apbp.value);
    chsh_b_se = std::sqrt(ab.std_error * ab.std_error + abp.std_error * abp.std_error +
                          apb.std_error * apb.std_error + apbp.std_error * apbp.std_error);
  }

  json j = envelope("bell", config);
  j["invariants"] = monitor_json(summary.monitor);
  j["counters"] = counters_json(summary.full);
  json r;
  auto vecj = [](const Vec3& v) { return json{v.x, v.y, v.z}; };
  r["setup"] = {{"a", vecj(setup.a)},
                {"b", vecj(setup.b)},
                {"a_prime", vecj(setup.a_prime)},
                {"b_prime", vecj(setup.b_prime)}};
  json pairs = json::array();
  const std::pair<const Vec3*, const Vec3*> combos[4] = {{&setup.a, &setup.b},
                                                         {&setup.a, &setup.b_prime},
                                                         {&setup.a_prime, &setup.b},
                                                         {&setup.a_prime, &setup.b_prime}};
  const char* names[4] = {"ab", "ab_prime", "a_prime_b", "a_prime_b_prime"};
  for (int i = 0; i < 4; ++i) {
    const EstimatorResult b = cb(*combos[i].first, *combos[i].second);
    pairs.push_back({{"pair", names[i]},
                     {"qm", cq(*combos[i].first, *combos[i].second)},
                     {"bohm", b.value},
                     {"bohm_std_error", b.std_error}});
  }
  // The Bohmian correlator reflects ensemble correlations of the undisturbed
  // pair prior to any measurement, not measured-outcome statistics.
  r["correlators_pre_measurement"] = pairs;
  r["chsh_qm"] = chsh_qm;
  r["chsh_bohm"] = {{"value", chsh_b}, {"std_error", chsh_b_se}};
  j["results"] = r;

  RunOutput out;
  out.json = j.dump(2);
  out.csv.clear();
  out.invariants_ok = summary.monitor.passed();
  return out;
}

RunOutput run_trajectory(const RunConfig& config, const PairConfiguration& start,
                         const IntegratorSpec& integ, double dt_output) {
  const std::vector<TrajectoryPoint> traj =
      integrate(config.state, start, integ, dt_output, config.constants);

  double max_mz = 0.0, max_e1 = 0.0, max_e2 = 0.0, max_en = 0.0;
  std::ostringstream csv;
  csv << csv_provenance("traj", config);
  csv << "# rel_tol=" << num(integ.rel_tol) << " abs_tol=" << num(integ.abs_tol)
      << " t_end=" << num(integ.t_end) << " dt_output=" << num(dt_output) << "\n";
  csv << "t,alpha1,beta1,gamma1,alpha2,beta2,gamma2,m1x,m1y,m1z,m2x,m2y,m2z,cos_big_phi,"
         "qpot,res_mz_sum,res_e1_m1,res_e2_m2,res_energy\n";
  for (const auto& p : traj) {
    const double res_mz = p.report.momenta.m1.z + p.report.momenta.m2.z;
    const double res_e1 = dot(principal_axis(p.cfg.rotor1), p.report.momenta.m1) - 0.5;
    const double res_e2 = dot(principal_axis(p.cfg.rotor2), p.report.momenta.m2) - 0.5;
    const double res_en =
        p.report.kinetic + p.report.qpot - config.constants.total_energy();
    max_mz = std::max(max_mz, std::fabs(res_mz));
    max_e1 = std::max(max_e1, std::fabs(res_e1));
    max_e2 = std::max(max_e2, std::fabs(res_e2));
    max_en = std::max(max_en, std::fabs(res_en));
    csv << num(p.t);
    for (double v : {p.cfg.rotor1.alpha, p.cfg.rotor1.beta, p.cfg.rotor1.gamma,
                     p.cfg.rotor2.alpha, p.cfg.rotor2.beta, p.cfg.rotor2.gamma,
                     p.report.momenta.m1.x, p.report.momenta.m1.y, p.report.momenta.m1.z,
                     p.report.momenta.m2.x, p.report.momenta.m2.y, p.report.momenta.m2.z,
                     p.report.cos_big_phi, p.report.qpot, res_mz, res_e1, res_e2, res_en})
      csv << "," << num(v);
    csv << "\n";
  }

  json j = envelope("traj", config);
  json r;
  r["n_points"] = traj.size();
  r["t_end"] = integ.t_end;
  r["max_abs_m1z_plus_m2z"] = max_mz;
  r["max_abs_e1_dot_m1_minus_half"] = max_e1;
  r["max_abs_e2_dot_m2_minus_half"] = max_e2;
  r["max_abs_energy_residual"] = max_en;
  j["results"] = r;
  const bool ok = max_mz < 1e-6 && max_e1 < 1e-6 && max_e2 < 1e-6 && max_en < 1e-6;
  j["invariants"] = {{"passed", ok}};

  RunOutput out;
  out.json = j.dump(2);
  out.csv = csv.str();
  out.invariants_ok = ok;
  return out;
}

} // namespace bohm
