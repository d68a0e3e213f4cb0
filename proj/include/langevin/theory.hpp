#pragma once

#include <cstdint>
#include <stdexcept>

#include "langevin/model.hpp"
#include "langevin/reference.hpp"
#include "langevin/rng.hpp"

namespace langevin {

enum class SplittingMethod { BAOAB, ABOBA };

enum class CorrectionOrder { F20, F21, F22 };

/// Requested a correction the analysis does not provide (f21/f22 for ABOBA).
class UnsupportedCorrection : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The expansion behind the marginal correction breaks down.
class NotPositiveDefinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Leading dt^2 corrections f_2 = f20 + f21/gamma + f22/gamma^2 to the
// numerical invariant density exp(-beta [H + dt^2 f_2]), in one dimension.
// The tensor contractions reduce to products of derivatives:
//   p^T U'' p                    -> p^2 u2
//   p . grad_x (Laplacian U)     -> p u3
//   p^T grad_x p^T U'' p         -> p^3 u3
//   p^T grad_x p^T grad_x p^T U'' p -> p^4 u4
//   grad U . grad_x p^T U'' p    -> u1 p^2 u3

/// BAOAB: (p^2 u2 - u2/beta)/8.  ABOBA: -(p^2 u2 - 2 u2/beta)/8.
double eval_f20(SplittingMethod method, const DerivativeTower1D& d, double p, double beta);
/// BAOAB only: u3 p / (24 beta) - p^3 u3 / 72.
double eval_f21(const DerivativeTower1D& d, double p, double beta);
/// BAOAB only: p^4 u4 / 296 - u1 p^2 u3 / 48. The 1/296 is kept as printed.
double eval_f22(const DerivativeTower1D& d, double p, double beta);
double eval_correction(SplittingMethod method, CorrectionOrder order, const DerivativeTower1D& d,
                       double p, double beta);

/// Writes f20 as a p^2 + c / beta.
struct QuadraticInP {
  double a = 0.0;
  double c = 0.0;
};
QuadraticInP f20_coefficients(SplittingMethod method, double u2);

/// Exact log of the p-marginal of exp(-beta [p^2/2 + dt^2 f20]) relative to
/// dt = 0: -log(1 + 2 dt^2 a)/2 - dt^2 c. Independent of beta in 1D. Throws NotPositiveDefinite
/// when dt^2 |u2| / 4 >= 1.
double marginal_log_weight(SplittingMethod method, double u2, double dt, double beta);

/// dt^2 coefficient of marginal_log_weight: -a - c. Zero for BAOAB
/// (the log-determinant term cancels the Laplacian term), -u2/8 for ABOBA.
/// The same validity check as marginal_log_weight applies.
double predicted_marginal_correction(SplittingMethod method, double u2, double dt, double beta);
double predicted_marginal_correction(SplittingMethod method, const PotentialModel& model, double x,
                                     double dt, double beta);

/// Bracket of L2* rho / rho for BAOAB with gamma = 1, split by parity in p:
///   even = (u2 - beta p^2 u2)/4,  odd = beta p u2 u1 / 4 - beta p^3 u3 / 12.
struct FredholmIntegrand {
  double even = 0.0;
  double odd = 0.0;
};
FredholmIntegrand fredholm_integrand(const DerivativeTower1D& d, double p, double beta);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

struct FredholmCheck {
  MonteCarloEstimate total;
  MonteCarloEstimate even;
  MonteCarloEstimate odd;
};

/// Canonical average of the integrand with x drawn exactly from exp(-beta U)
/// and p from N(0, 1/beta). Each part should vanish.
FredholmCheck fredholm_average_check(const PotentialModel& model, double beta, std::uint64_t n_samples,
                                     NoiseStream& stream);

}  // namespace langevin
