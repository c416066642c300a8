#include "bohm/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bohm/wavefunction.hpp"

namespace bohm {

namespace {

using State6 = std::array<double, 6>;

State6 to_state(const PairConfiguration& cfg) {
  return {cfg.rotor1.alpha, cfg.rotor1.beta, cfg.rotor1.gamma,
          cfg.rotor2.alpha, cfg.rotor2.beta, cfg.rotor2.gamma};
}

PairConfiguration to_config(const State6& y) {
  return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
}

bool inside_guard_bands(const PairStateParams& state, const State6& y) {
  if (std::fabs(std::sin(y[0])) < kTrajectoryPoleGuard ||
      std::fabs(std::sin(y[3])) < kTrajectoryPoleGuard)
    return true;
  return wave_terms(state, to_config(y)).g < kTrajectoryNodeGuardW2;
}

State6 rhs(const PairStateParams& state, const State6& y, const PhysicalConstants& consts) {
  const SixVelocity v = velocity_field(state, to_config(y), consts);
  return {v.d_alpha1, v.d_beta1, v.d_gamma1, v.d_alpha2, v.d_beta2, v.d_gamma2};
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct StepResult {
  State6 y;
  State6 f; // derivative at the new point (FSAL)
  double error; // scaled error norm
};

StepResult dp5_step(const PairStateParams& state, const PhysicalConstants& consts,
                    const State6& y0, const State6& f0, double h, double rel_tol,
                    double abs_tol) {
  State6 k2, k3, k4, k5, k6, yt;
  auto stage = [&](const State6& y) { return rhs(state, y, consts); };

  for (int i = 0; i < 6; ++i) yt[i] = y0[i] + h * a21 * f0[i];
  k2 = stage(yt);
  for (int i = 0; i < 6; ++i) yt[i] = y0[i] + h * (a31 * f0[i] + a32 * k2[i]);
  k3 = stage(yt);
  for (int i = 0; i < 6; ++i) yt[i] = y0[i] + h * (a41 * f0[i] + a42 * k2[i] + a43 * k3[i]);
  k4 = stage(yt);
  for (int i = 0; i < 6; ++i)
    yt[i] = y0[i] + h * (a51 * f0[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  k5 = stage(yt);
  for (int i = 0; i < 6; ++i)
    yt[i] = y0[i] + h * (a61 * f0[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  k6 = stage(yt);

  StepResult out;
  for (int i = 0; i < 6; ++i)
    out.y[i] = y0[i] + h * (b1 * f0[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  out.f = stage(out.y);

  double err = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double e = h * (e1 * f0[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * out.f[i]);
    const double scale = abs_tol + rel_tol * std::max(std::fabs(y0[i]), std::fabs(out.y[i]));
    err += (e / scale) * (e / scale);
  }
  out.error = std::sqrt(err / 6.0);
  return out;
}

// Cubic Hermite interpolation between accepted steps (dense output).
State6 hermite(const State6& y0, const State6& f0, const State6& y1, const State6& f1,
               double h, double s) {
  State6 y;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  for (int i = 0; i < 6; ++i)
    y[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
  return y;
}

} // namespace

SixVelocity velocity_field(const PairStateParams& state, const PairConfiguration& cfg,
                           const PhysicalConstants& constants) {
  const StateCoeffs k = StateCoeffs::from(state);
  const RotorTrig r1 = RotorTrig::from(cfg.rotor1);
  const RotorTrig r2 = RotorTrig::from(cfg.rotor2);
  if (std::fabs(r1.sin_alpha) < kPoleThresholdSinAlpha ||
      std::fabs(r2.sin_alpha) < kPoleThresholdSinAlpha)
    throw PoleError("velocity_field: |sin alpha| below pole threshold");
  const double d = cfg.rotor1.beta - cfg.rotor2.beta + state.phi;
  const WaveTerms w = wave_terms(k, r1, r2, std::cos(d), std::sin(d));
  if (w.is_node()) throw NodeError("velocity_field: configuration on a node of psi");
  const PhaseGradient g = phase_gradient_from_terms(k, r1, r2, w);

  const double inv_i = 1.0 / constants.inertia;
  auto planar = [&](const RotorTrig& r, double s_a, double s_b, double s_g, double& db,
                    double& dg) {
    const double inv_s2 = 1.0 / (r.sin_alpha * r.sin_alpha);
    db = (s_b - r.cos_alpha * s_g) * inv_s2 * inv_i;
    dg = (s_g - r.cos_alpha * s_b) * inv_s2 * inv_i;
    (void)s_a;
  };
  SixVelocity v;
  v.d_alpha1 = g.d_alpha1 * inv_i;
  v.d_alpha2 = g.d_alpha2 * inv_i;
  planar(r1, g.d_alpha1, g.d_beta1, g.d_gamma1, v.d_beta1, v.d_gamma1);
  planar(r2, g.d_alpha2, g.d_beta2, g.d_gamma2, v.d_beta2, v.d_gamma2);
  return v;
}

void validate(const IntegratorSpec& spec) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
    throw DomainError("IntegratorSpec: tolerances must be positive");
  if (!(spec.max_step > 0.0)) throw DomainError("IntegratorSpec: max_step must be positive");
  if (!std::isfinite(spec.t_end) || spec.t_end == 0.0)
    throw DomainError("IntegratorSpec: t_end must be finite and nonzero");
}

std::vector<TrajectoryPoint> integrate(const PairStateParams& state,
                                       const PairConfiguration& start,
                                       const IntegratorSpec& spec, double dt_output,
                                       const PhysicalConstants& constants) {
  validate(state);
  validate(spec);
  if (!(dt_output > 0.0)) throw DomainError("integrate: dt_output must be positive");

  State6 y = to_state(start);
  if (inside_guard_bands(state, y))
    throw NodeError("integrate: start inside the node/pole guard band");
  State6 f = rhs(state, y, constants);

  const double dir = spec.t_end > 0.0 ? 1.0 : -1.0;
  const double t_end = spec.t_end;
  double t = 0.0;
  double h = dir * std::min(spec.max_step, 1e-3);

  std::vector<TrajectoryPoint> out;
  auto emit = [&](double te, const State6& ye) {
    TrajectoryPoint p;
    p.t = te;
    p.cfg = to_config(ye);
    p.report = configuration_report(state, p.cfg, constants);
    out.push_back(std::move(p));
  };
  emit(0.0, y);
  double next_out = dir * dt_output;

  while (dir * (t_end - t) > 1e-14 * std::max(1.0, std::fabs(t_end))) {
    if (dir * (t + h - t_end) > 0.0) h = t_end - t;
    const StepResult step = dp5_step(state, constants, y, f, h, spec.rel_tol, spec.abs_tol);

    const bool guarded = inside_guard_bands(state, step.y);
    if (step.error <= 1.0 && !guarded) {
      // dense output inside the accepted interval
      while (dir * (next_out - (t + h)) <= 1e-12 && dir * (next_out - t_end) < 0.0) {
        const double s = (next_out - t) / h;
        emit(next_out, hermite(y, f, step.y, step.f, h, s));
        next_out += dir * dt_output;
      }
      t += h;
      y = step.y;
      f = step.f;
      const double grow = step.error > 1e-300
                              ? std::clamp(0.9 * std::pow(step.error, -0.2), 0.2, 5.0)
                              : 5.0;
      h = dir * std::min(spec.max_step, std::fabs(h) * grow);
    } else {
      h = guarded ? 0.5 * h
                  : dir * std::max(0.2 * std::fabs(h),
                                   0.9 * std::fabs(h) * std::pow(step.error, -0.2));
    }
    if (std::fabs(h) < 1e-13 * std::max(1.0, std::fabs(t)))
      throw StepUnderflowError("integrate: step size underflow near a node or pole at t = " +
                               std::to_string(t));
  }
  emit(t_end, y);
  return out;
}

EulerTriple exact_single_rotor(const EulerTriple& start, double t, bool spin_down,
                               double inertia) {
  const double half = 0.5 * start.alpha;
  EulerTriple out = start;
  if (spin_down) {
    const double s = std::sin(half);
    const double tau = 4.0 * inertia * s * s;
    out.beta += t / tau;
    out.gamma -= t / tau;
  } else {
    const double c = std::cos(half);
    const double tau = 4.0 * inertia * c * c;
    out.beta -= t / tau;
    out.gamma -= t / tau;
  }
  return canonicalize(out);
}

} // namespace bohm
