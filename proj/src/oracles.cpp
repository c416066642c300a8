#include "bohm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bohm/entropy.hpp"
#include "bohm/errors.hpp"

namespace bohm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Adaptive Simpson quadrature; integrands here are smooth inside the pieces.
double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-11) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// Series-protected bracket of the MxyMaxEnt form:
//   1 - (1 + 2 mu^2 + 6 mu^4) sqrt(1 - 4 mu^2) = 20 mu^6 + 30 mu^8 + 72 mu^10 + ...
// The direct expression loses all significant digits below mu ~ 1e-2.
double mxy_maxent_bracket(double mu) {
  const double m2 = mu * mu;
  if (mu < 0.08) {
    const double m6 = m2 * m2 * m2;
    return m6 * (20.0 + 30.0 * m2 + 72.0 * m2 * m2);
  }
  return 1.0 - (1.0 + 2.0 * m2 + 6.0 * m2 * m2) * std::sqrt(1.0 - 4.0 * m2);
}

double mxy_maxent_pdf(double mu) {
  if (mu <= 0.0) return 0.0;
  if (mu >= 0.5) return 2.0 / (15.0 * mu * mu * mu * mu * mu);
  return 2.0 / 15.0 * mxy_maxent_bracket(mu) / (mu * mu * mu * mu * mu);
}

// CDF of the M1zSqMaxEnt form, reused by the eta-signed product distribution.
double m1zsq_cdf(double mu) {
  if (mu <= 0.0) return 0.0;
  if (mu <= 0.25) return 1.6 * std::sqrt(mu);
  return 1.0 - 1.0 / (80.0 * mu * mu);
}

double m1zsq_pdf(double mu) {
  if (mu < 0.0) throw DomainError("analytic_density: negative value for a squared variable");
  if (mu <= 0.25) return 1.6 / (2.0 * std::sqrt(mu)); // (8/5)(4 mu)^{-1/2}
  return 1.6 / (64.0 * mu * mu * mu);                 // (8/5)(4 mu)^{-3}
}

} // namespace

AnalyticDistribution::AnalyticDistribution(DistKind kind, int eta) : kind_(kind), eta_(eta) {
  switch (kind_) {
    case DistKind::MomentumLength:
      support_min_ = 0.5;
      support_max_ = kInf;
      nonsmooth_ = {0.5};
      break;
    case DistKind::MomentumLengthSq:
      support_min_ = 0.25;
      support_max_ = kInf;
      nonsmooth_ = {0.25};
      break;
    case DistKind::M1xProductState:
      support_min_ = -kInf;
      support_max_ = kInf;
      nonsmooth_ = {};
      break;
    case DistKind::MxyProductState:
      support_min_ = 0.0;
      support_max_ = kInf;
      nonsmooth_ = {};
      break;
    case DistKind::CosPolarMaxEnt:
      support_min_ = -1.0;
      support_max_ = 1.0;
      nonsmooth_ = {-1.0, 1.0};
      break;
    case DistKind::M1zMaxEnt:
      support_min_ = -kInf;
      support_max_ = kInf;
      nonsmooth_ = {-0.5, 0.5};
      break;
    case DistKind::M1zSqMaxEnt:
      support_min_ = 0.0;
      support_max_ = kInf;
      nonsmooth_ = {0.0, 0.25};
      break;
    case DistKind::MxyMaxEnt:
      support_min_ = 0.0;
      support_max_ = kInf;
      nonsmooth_ = {0.5};
      break;
    case DistKind::ProductZMaxEnt:
      if (eta_ == -1) {
        support_min_ = -kInf;
        support_max_ = 0.0;
        nonsmooth_ = {-0.25, 0.0};
      } else {
        support_min_ = 0.0;
        support_max_ = kInf;
        nonsmooth_ = {0.0, 0.25};
      }
      break;
    case DistKind::NormalizedProductMaxEnt:
      if (eta_ == -1) {
        support_min_ = -1.0;
        support_max_ = 0.0;
        nonsmooth_ = {-1.0, 0.0};
      } else {
        support_min_ = 0.0;
        support_max_ = 1.0;
        nonsmooth_ = {0.0, 1.0};
      }
      break;
  }
}

AnalyticDistribution AnalyticDistribution::make(DistKind kind, int eta) {
  if (eta != -1 && eta != 1) throw DomainError("AnalyticDistribution: eta must be +-1");
  AnalyticDistribution d(kind, eta);
  // Gatekeeper: every form must carry unit mass.
  const double lo = std::isinf(d.support_min_) ? -4096.0 : d.support_min_;
  const double hi = std::isinf(d.support_max_) ? 4096.0 : d.support_max_;
  const double total = d.mass(lo, hi);
  if (std::fabs(total - 1.0) > 1e-8)
    throw DomainError("AnalyticDistribution: transcribed form does not integrate to 1");
  return d;
}

double AnalyticDistribution::pdf(double mu) const {
  switch (kind_) {
    case DistKind::MomentumLength:
      if (mu < 0.0) throw DomainError("analytic_density: negative momentum length");
      return mu < 0.5 ? 0.0 : 0.25 / (mu * mu * mu * mu * mu);
    case DistKind::MomentumLengthSq:
      if (mu < 0.0) throw DomainError("analytic_density: negative squared length");
      return mu < 0.25 ? 0.0 : 1.0 / (8.0 * mu * mu * mu);
    case DistKind::M1xProductState: {
      const double b = 1.0 + 4.0 * mu * mu;
      return 1.5 / (b * b * std::sqrt(b));
    }
    case DistKind::MxyProductState: {
      if (mu < 0.0) throw DomainError("analytic_density: negative xy projection");
      const double b = 1.0 + 4.0 * mu * mu;
      return 16.0 * mu / (b * b * b);
    }
    case DistKind::CosPolarMaxEnt:
      if (mu < -1.0 || mu > 1.0) throw DomainError("analytic_density: |cos theta| > 1");
      return 0.5;
    case DistKind::M1zMaxEnt: {
      const double a = std::fabs(2.0 * mu);
      return a <= 1.0 ? 0.8 : 0.8 / (a * a * a * a * a);
    }
    case DistKind::M1zSqMaxEnt:
      return m1zsq_pdf(mu);
    case DistKind::MxyMaxEnt:
      if (mu < 0.0) throw DomainError("analytic_density: negative xy projection");
      return mxy_maxent_pdf(mu);
    case DistKind::ProductZMaxEnt: {
      const double v = eta_ * mu;
      if (v < 0.0) return 0.0;
      return v == 0.0 ? kInf : m1zsq_pdf(v);
    }
    case DistKind::NormalizedProductMaxEnt: {
      if (mu < -1.0 || mu > 1.0)
        throw DomainError("analytic_density: |normalized product| > 1");
      const double v = eta_ * mu;
      if (v < 0.0) return 0.0;
      return 0.5 / std::sqrt(v);
    }
  }
  return 0.0;
}

double AnalyticDistribution::cdf(double mu) const {
  switch (kind_) {
    case DistKind::MomentumLength:
      if (mu <= 0.5) return 0.0;
      return 1.0 - 1.0 / (16.0 * mu * mu * mu * mu);
    case DistKind::MomentumLengthSq:
      if (mu <= 0.25) return 0.0;
      return 1.0 - 1.0 / (16.0 * mu * mu);
    case DistKind::M1xProductState: {
      const double b = 1.0 + 4.0 * mu * mu;
      return 0.5 + mu * (3.0 + 8.0 * mu * mu) / (2.0 * b * std::sqrt(b));
    }
    case DistKind::MxyProductState: {
      if (mu <= 0.0) return 0.0;
      const double b = 1.0 + 4.0 * mu * mu;
      return 1.0 - 1.0 / (b * b);
    }
    case DistKind::CosPolarMaxEnt:
      return std::clamp(0.5 * (mu + 1.0), 0.0, 1.0);
    case DistKind::M1zMaxEnt: {
      if (mu < -0.5) {
        const double a = -2.0 * mu;
        return 0.1 / (a * a * a * a);
      }
      if (mu <= 0.5) return 0.1 + 0.8 * (mu + 0.5);
      const double a = 2.0 * mu;
      return 1.0 - 0.1 / (a * a * a * a);
    }
    case DistKind::M1zSqMaxEnt:
      return m1zsq_cdf(mu);
    case DistKind::MxyMaxEnt: {
      if (mu <= 0.0) return 0.0;
      if (mu >= 0.5) return 7.0 / 15.0 + (16.0 - 1.0 / (mu * mu * mu * mu)) / 30.0;
      return integrate([](double x) { return mxy_maxent_pdf(x); }, 0.0, mu);
    }
    case DistKind::ProductZMaxEnt:
      if (eta_ == -1) return 1.0 - m1zsq_cdf(-mu);
      return m1zsq_cdf(mu);
    case DistKind::NormalizedProductMaxEnt: {
      if (eta_ == -1) {
        if (mu >= 0.0) return 1.0;
        if (mu <= -1.0) return 0.0;
        return 1.0 - std::sqrt(-mu);
      }
      if (mu <= 0.0) return 0.0;
      if (mu >= 1.0) return 1.0;
      return std::sqrt(mu);
    }
  }
  return 0.0;
}

double AnalyticDistribution::mass(double a, double b) const {
  if (b <= a) return 0.0;
  return cdf(b) - cdf(a);
}

double AnalyticDistribution::bin_average(double a, double b) const {
  if (!(b > a)) throw DomainError("bin_average: empty interval");
  return mass(a, b) / (b - a);
}

double AnalyticDistribution::mean() const {
  const double lo = std::isinf(support_min_) ? -4096.0 : support_min_ + 1e-12;
  const double hi = std::isinf(support_max_) ? 4096.0 : support_max_;
  double acc = 0.0;
  std::vector<double> cuts{lo};
  for (double k : nonsmooth_)
    if (k > lo && k < hi) cuts.push_back(k);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += integrate([this](double x) { return x * pdf(x); }, cuts[i], cuts[i + 1]);
  return acc;
}

double AnalyticDistribution::second_moment() const {
  const double lo = std::isinf(support_min_) ? -4096.0 : support_min_ + 1e-12;
  const double hi = std::isinf(support_max_) ? 4096.0 : support_max_;
  double acc = 0.0;
  std::vector<double> cuts{lo};
  for (double k : nonsmooth_)
    if (k > lo && k < hi) cuts.push_back(k);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += integrate([this](double x) { return x * x * pdf(x); }, cuts[i], cuts[i + 1]);
  return acc;
}

QmCorrelators qm_reference(const PairStateParams& state) {
  validate(state);
  QmCorrelators out;
  const double st = std::sin(state.theta), ct = std::cos(state.theta);
  const double cp = std::cos(state.phi), sp = std::sin(state.phi);
  out.spin_expectation = {0.0, 0.0, 0.5 * ct};
  const double sc = 0.25 * st * cp;
  const double ss = 0.25 * st * sp;
  out.spin_tensor = {{{sc, -ss, 0.0}, {ss, sc, 0.0}, {0.0, 0.0, -0.25}}};
  out.s1_dot_s2 = 0.25 * (2.0 * st * cp - 1.0);
  const double c = std::cos(0.5 * state.theta);
  out.eof_bits = binary_entropy(c * c);
  return out;
}

BohmianReference bohmian_reference_ratios(const PairStateParams& state) {
  if (std::fabs(state.theta - 0.5 * kPi) > 1e-12)
    throw RegimeError("bohmian_reference_ratios: relations hold at theta = pi/2 only");
  const QmCorrelators qm = qm_reference(state);
  BohmianReference out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.tensor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          (2.0 / 3.0) * qm.spin_tensor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  out.m1_dot_m2 = (2.0 / 3.0) * qm.s1_dot_s2;
  out.sum_sq = (2.0 / 3.0) * (1.5 + 2.0 * qm.s1_dot_s2);
  return out;
}

} // namespace bohm
