#include "langevin/theory.hpp"

#include <cmath>

namespace langevin {

double eval_f20(SplittingMethod method, const DerivativeTower1D& d, double p, double beta) {
  if (method == SplittingMethod::BAOAB) return (p * p * d.u2 - d.u2 / beta) / 8.0;
  return -(p * p * d.u2 - 2.0 * d.u2 / beta) / 8.0;
}

double eval_f21(const DerivativeTower1D& d, double p, double beta) {
  return d.u3 * p / (24.0 * beta) - p * p * p * d.u3 / 72.0;
}

double eval_f22(const DerivativeTower1D& d, double p, double /*beta*/) {
  const double p2 = p * p;
  return p2 * p2 * d.u4 / 296.0 - d.u1 * p2 * d.u3 / 48.0;
}

double eval_correction(SplittingMethod method, CorrectionOrder order, const DerivativeTower1D& d,
                       double p, double beta) {
  if (order == CorrectionOrder::F20) return eval_f20(method, d, p, beta);
  if (method != SplittingMethod::BAOAB) {
    throw UnsupportedCorrection("f21 and f22 are only derived for BAOAB");
  }
  return order == CorrectionOrder::F21 ? eval_f21(d, p, beta) : eval_f22(d, p, beta);
}

QuadraticInP f20_coefficients(SplittingMethod method, double u2) {
  if (method == SplittingMethod::BAOAB) return {u2 / 8.0, -(u2 / 8.0)};
  return {-(u2 / 8.0), u2 / 4.0};
}

namespace {

void require_valid(double u2, double dt) {
  if (!(dt * dt * std::abs(u2) / 4.0 < 1.0)) {
    throw NotPositiveDefinite("momentum quadratic form is not positive definite: dt^2 |U''| / 4 >= 1");
  }
}

}  // namespace

double marginal_log_weight(SplittingMethod method, double u2, double dt, double /*beta*/) {
  require_valid(u2, dt);
  const QuadraticInP q = f20_coefficients(method, u2);
  // int exp(-beta [p^2 (1 + 2 dt^2 a)/2 + dt^2 c/beta]) dp over int exp(-beta p^2/2) dp.
  return -0.5 * std::log1p(2.0 * dt * dt * q.a) - dt * dt * q.c;
}

double predicted_marginal_correction(SplittingMethod method, double u2, double dt,
                                     double /*beta*/) {
  require_valid(u2, dt);
  // First-order term of the log-determinant (-a) against the p-free part (-c).
  const QuadraticInP q = f20_coefficients(method, u2);
  return -q.a - q.c;
}

double predicted_marginal_correction(SplittingMethod method, const PotentialModel& model, double x,
                                     double dt, double beta) {
  return predicted_marginal_correction(method, model.tower(x).u2, dt, beta);
}

FredholmIntegrand fredholm_integrand(const DerivativeTower1D& d, double p, double beta) {
  return {
      (d.u2 - beta * p * p * d.u2) / 4.0,
      beta * p * d.u2 * d.u1 / 4.0 - beta * p * p * p * d.u3 / 12.0,
  };
}

namespace {

struct Accumulator {
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t n = 0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }

  MonteCarloEstimate result() const {
    const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
  }
};

}  // namespace

FredholmCheck fredholm_average_check(const PotentialModel& model, double beta, std::uint64_t n_samples,
                                     NoiseStream& stream) {
  if (model.kind() != ModelKind::Oscillator1D) {
    throw DomainError("fredholm_average_check is implemented for the 1D oscillator");
  }
  if (n_samples < 2) throw DomainError("fredholm_average_check needs at least two samples");
  const GibbsSampler1D sampler(oscillator_target(), beta);
  const double p_scale = 1.0 / std::sqrt(beta);
  Accumulator total, even, odd;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const double x = sampler.sample(stream);
    const double p = p_scale * stream.next_normal();
    const FredholmIntegrand g = fredholm_integrand(model.tower(x), p, beta);
    total.add(g.even + g.odd);
    even.add(g.even);
    odd.add(g.odd);
  }
  return {total.result(), even.result(), odd.result()};
}

}  // namespace langevin
