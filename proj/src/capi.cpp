#include "bohmpair.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "bohm/runs.hpp"
#include "bohm/selftest.hpp"

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& msg) { t_last_error = msg; }

bq_status map_exception() {
  try {
    throw;
  } catch (const bohm::NodeError& e) {
    set_error(e.what());
    return BQ_ERR_NODE;
  } catch (const bohm::PoleError& e) {
    set_error(e.what());
    return BQ_ERR_POLE;
  } catch (const bohm::EmptyEnsembleError& e) {
    set_error(e.what());
    return BQ_ERR_EMPTY_ENSEMBLE;
  } catch (const bohm::EnvelopeViolationError& e) {
    set_error(e.what());
    return BQ_ERR_ENVELOPE;
  } catch (const bohm::StencilError& e) {
    set_error(e.what());
    return BQ_ERR_STENCIL;
  } catch (const bohm::DegenerateProjectionError& e) {
    set_error(e.what());
    return BQ_ERR_DEGENERATE;
  } catch (const bohm::IllConditionedExtractionError& e) {
    set_error(e.what());
    return BQ_ERR_ILL_CONDITIONED;
  } catch (const bohm::RegimeError& e) {
    set_error(e.what());
    return BQ_ERR_REGIME;
  } catch (const bohm::ResolutionError& e) {
    set_error(e.what());
    return BQ_ERR_RESOLUTION;
  } catch (const bohm::ClippedMassError& e) {
    set_error(e.what());
    return BQ_ERR_CLIPPED_MASS;
  } catch (const bohm::StepUnderflowError& e) {
    set_error(e.what());
    return BQ_ERR_STEP_UNDERFLOW;
  } catch (const bohm::IoError& e) {
    set_error(e.what());
    return BQ_ERR_IO;
  } catch (const bohm::DomainError& e) {
    set_error(e.what());
    return BQ_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc& e) {
    set_error("out of memory");
    return BQ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return BQ_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return BQ_ERR_INTERNAL;
  }
}

bohm::PairConfiguration config_from(const double lambda[6]) {
  return {{lambda[0], lambda[1], lambda[2]}, {lambda[3], lambda[4], lambda[5]}};
}

} // namespace

struct bq_run {
  bohm::RunConfig config;
};

struct bq_result {
  std::string json;
  std::string csv;
  bool invariants_ok = true;
};

extern "C" {

const char* bq_status_name(bq_status status) {
  switch (status) {
    case BQ_OK: return "ok";
    case BQ_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BQ_ERR_NODE: return "node";
    case BQ_ERR_POLE: return "pole";
    case BQ_ERR_EMPTY_ENSEMBLE: return "empty_ensemble";
    case BQ_ERR_ENVELOPE: return "envelope_violation";
    case BQ_ERR_STENCIL: return "stencil";
    case BQ_ERR_DEGENERATE: return "degenerate_projection";
    case BQ_ERR_ILL_CONDITIONED: return "ill_conditioned";
    case BQ_ERR_REGIME: return "regime";
    case BQ_ERR_RESOLUTION: return "resolution";
    case BQ_ERR_CLIPPED_MASS: return "clipped_mass";
    case BQ_ERR_STEP_UNDERFLOW: return "step_underflow";
    case BQ_ERR_IO: return "io";
    case BQ_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* bq_last_error(void) { return t_last_error.c_str(); }

const char* bq_version(void) { return bohm::library_version(); }

bq_status bq_evaluate(double theta, double phi, const double lambda[6], double inertia,
                      bq_point_report* out) {
  if (lambda == nullptr || out == nullptr) {
    set_error("bq_evaluate: null pointer argument");
    return BQ_ERR_INVALID_ARGUMENT;
  }
  try {
    const bohm::PairStateParams state{theta, phi};
    bohm::validate(state);
    bohm::PhysicalConstants consts;
    consts.inertia = inertia;
    bohm::validate(consts);
    const bohm::PairConfiguration cfg = config_from(lambda);
    const bohm::ConfigurationReport rep = bohm::configuration_report(state, cfg, consts);
    out->m1[0] = rep.momenta.m1.x;
    out->m1[1] = rep.momenta.m1.y;
    out->m1[2] = rep.momenta.m1.z;
    out->m2[0] = rep.momenta.m2.x;
    out->m2[1] = rep.momenta.m2.y;
    out->m2[2] = rep.momenta.m2.z;
    const bohm::Vec3 e1 = bohm::principal_axis(cfg.rotor1);
    const bohm::Vec3 e2 = bohm::principal_axis(cfg.rotor2);
    out->e1[0] = e1.x;
    out->e1[1] = e1.y;
    out->e1[2] = e1.z;
    out->e2[0] = e2.x;
    out->e2[1] = e2.y;
    out->e2[2] = e2.z;
    out->len1 = rep.len1;
    out->len2 = rep.len2;
    out->mxy1 = rep.mxy1;
    out->mxy2 = rep.mxy2;
    out->cos_big_phi = rep.cos_big_phi;
    out->cos_az = rep.cos_az;
    out->sin_az = rep.sin_az;
    out->kinetic = rep.kinetic;
    out->qpot = rep.qpot;
    out->density = rep.density;
    const std::complex<double> psi = bohm::guiding_wave(state, cfg);
    out->psi_re = psi.real();
    out->psi_im = psi.imag();
    const bohm::PhaseGradient g = bohm::phase_gradient(state, cfg);
    out->phase_grad[0] = g.d_alpha1;
    out->phase_grad[1] = g.d_beta1;
    out->phase_grad[2] = g.d_gamma1;
    out->phase_grad[3] = g.d_alpha2;
    out->phase_grad[4] = g.d_beta2;
    out->phase_grad[5] = g.d_gamma2;
    return BQ_OK;
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_qm_correlator(double theta, double phi, const double a[3], const double b[3],
                           double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    set_error("bq_qm_correlator: null pointer argument");
    return BQ_ERR_INVALID_ARGUMENT;
  }
  try {
    const bohm::PairStateParams state{theta, phi};
    bohm::validate(state);
    *out = bohm::qm_correlator(state, {a[0], a[1], a[2]}, {b[0], b[1], b[2]});
    return BQ_OK;
  } catch (...) {
    return map_exception();
  }
}

bq_run* bq_run_new(void) { return new (std::nothrow) bq_run; }

void bq_run_free(bq_run* run) { delete run; }

bq_status bq_run_set_state(bq_run* run, double theta, double phi) {
  if (run == nullptr) return BQ_ERR_INVALID_ARGUMENT;
  try {
    bohm::PairStateParams s{theta, phi};
    bohm::validate(s);
    run->config.state = s;
    return BQ_OK;
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_set_grid(bq_run* run, uint32_t n1, uint32_t n2, uint32_t n3, uint32_t n4) {
  if (run == nullptr) return BQ_ERR_INVALID_ARGUMENT;
  try {
    bohm::GridSpec g{n1, n2, n3, n4};
    bohm::validate(g);
    run->config.grid = g;
    run->config.sampler = bohm::SamplerKind::Grid;
    return BQ_OK;
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_set_mc(bq_run* run, uint64_t n_samples, uint64_t seed) {
  if (run == nullptr) return BQ_ERR_INVALID_ARGUMENT;
  try {
    bohm::McSpec m;
    m.n_samples = n_samples;
    m.seed = seed;
    bohm::validate(m);
    run->config.mc = m;
    run->config.sampler = bohm::SamplerKind::Mc;
    return BQ_OK;
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_set_histogram(bq_run* run, double epsilon, double mu_max) {
  if (run == nullptr) return BQ_ERR_INVALID_ARGUMENT;
  if (!(epsilon > 0.0) || !(mu_max > 0.0)) {
    set_error("bq_run_set_histogram: epsilon and mu_max must be positive");
    return BQ_ERR_INVALID_ARGUMENT;
  }
  run->config.epsilon = epsilon;
  run->config.mu_max = mu_max;
  return BQ_OK;
}

bq_status bq_run_set_threads(bq_run* run, int threads) {
  if (run == nullptr || threads < 0) return BQ_ERR_INVALID_ARGUMENT;
  run->config.threads = threads;
  return BQ_OK;
}

bq_status bq_run_set_inertia(bq_run* run, double inertia) {
  if (run == nullptr) return BQ_ERR_INVALID_ARGUMENT;
  try {
    bohm::PhysicalConstants c;
    c.inertia = inertia;
    bohm::validate(c);
    run->config.constants = c;
    return BQ_OK;
  } catch (...) {
    return map_exception();
  }
}

namespace {

bq_status deliver(bohm::RunOutput&& output, bq_result** out) {
  auto* res = new (std::nothrow) bq_result;
  if (res == nullptr) return BQ_ERR_INTERNAL;
  res->json = std::move(output.json);
  res->csv = std::move(output.csv);
  res->invariants_ok = output.invariants_ok;
  *out = res;
  return BQ_OK;
}

} // namespace

bq_status bq_run_distribution(bq_run* run, const char* observable, bq_result** out) {
  if (run == nullptr || observable == nullptr || out == nullptr)
    return BQ_ERR_INVALID_ARGUMENT;
  try {
    const auto obs = bohm::observable_from_name(observable);
    if (!obs) {
      set_error(std::string("unknown observable: ") + observable);
      return BQ_ERR_INVALID_ARGUMENT;
    }
    return deliver(bohm::run_distribution(run->config, *obs), out);
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_correlation(bq_run* run, bq_result** out) {
  if (run == nullptr || out == nullptr) return BQ_ERR_INVALID_ARGUMENT;
  try {
    return deliver(bohm::run_correlation(run->config), out);
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_entropy(bq_run* run, const uint32_t* nu_values, size_t nu_count,
                         bq_result** out) {
  if (run == nullptr || out == nullptr || (nu_count > 0 && nu_values == nullptr))
    return BQ_ERR_INVALID_ARGUMENT;
  try {
    std::vector<unsigned> nus(nu_values, nu_values + nu_count);
    return deliver(bohm::run_entropy(run->config, nus), out);
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_bell(bq_run* run, const double a[3], const double b[3],
                      const double a_prime[3], const double b_prime[3], bq_result** out) {
  if (run == nullptr || a == nullptr || b == nullptr || a_prime == nullptr ||
      b_prime == nullptr || out == nullptr)
    return BQ_ERR_INVALID_ARGUMENT;
  try {
    const bohm::PolarizerSetup setup{{a[0], a[1], a[2]},
                                     {b[0], b[1], b[2]},
                                     {a_prime[0], a_prime[1], a_prime[2]},
                                     {b_prime[0], b_prime[1], b_prime[2]}};
    return deliver(bohm::run_bell(run->config, setup), out);
  } catch (...) {
    return map_exception();
  }
}

bq_status bq_run_trajectory(bq_run* run, const double lambda0[6], double t_end,
                            double dt_output, double rel_tol, double abs_tol,
                            bq_result** out) {
  if (run == nullptr || lambda0 == nullptr || out == nullptr)
    return BQ_ERR_INVALID_ARGUMENT;
  try {
    bohm::IntegratorSpec spec;
    spec.t_end = t_end;
    spec.rel_tol = rel_tol;
    spec.abs_tol = abs_tol;
    return deliver(
        bohm::run_trajectory(run->config, config_from(lambda0), spec, dt_output), out);
  } catch (...) {
    return map_exception();
  }
}

void bq_result_free(bq_result* result) { delete result; }

const char* bq_result_json(bq_result* result) {
  return result == nullptr ? nullptr : result->json.c_str();
}

const char* bq_result_csv(bq_result* result) {
  if (result == nullptr || result->csv.empty()) return nullptr;
  return result->csv.c_str();
}

int bq_result_invariants_ok(bq_result* result) {
  return (result != nullptr && result->invariants_ok) ? 1 : 0;
}

int bq_selftest(const char* filter, int threads, int verbose) {
  try {
    const auto results = bohm::run_acceptance(filter ? filter : "", threads,
                                              verbose != 0, std::cout);
    int failures = 0;
    for (const auto& r : results)
      if (!r.passed) ++failures;
    return failures;
  } catch (const std::exception& e) {
    set_error(e.what());
    std::cerr << "selftest aborted: " << e.what() << "\n";
    return -1;
  }
}

} // extern "C"
