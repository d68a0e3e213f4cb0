#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "langevin/dynamics.hpp"
#include "langevin/model.hpp"
#include "langevin/reference.hpp"
#include "langevin/stats.hpp"

namespace langevin {

struct BinSpec {
  std::size_t count = 20;
  double lo = -3.5;
  double hi = 3.5;
};

/// One trajectory: a single (method, stepsize, gamma, replica) cell.
struct TrajectorySpec {
  ModelKind model = ModelKind::Oscillator1D;
  std::string method = "baoab";
  LangevinParams params{};
  double t_total = 10.0;
  double burn_in_fraction = 0.1;
  std::size_t stride = 1;
  BinSpec bins{};
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;
  /// Binned-sample counts at which a snapshot of the histogram is kept.
  std::vector<std::uint64_t> checkpoints;
};

struct TrajectoryResult {
  Histogram histogram;
  std::vector<Histogram> checkpoint_histograms;
  bool diverged = false;
  std::string divergence_reason;
  std::uint64_t steps_planned = 0;
  std::uint64_t steps_completed = 0;
  std::uint64_t samples_binned = 0;
  std::uint64_t force_evaluations = 0;
  double wall_s = 0.0;
};

/// round(t_total / dt); throws DomainError when that is zero.
std::uint64_t step_count(double t_total, double dt);
std::uint64_t burn_in_steps(std::uint64_t steps, double fraction);

/// Integrates from the model's standard initial condition (x = 0 in 1D, the
/// hexagon for clusters, momenta drawn at kBT from the same stream), drops the
/// burn-in, and bins every stride-th configuration: the position in 1D, all
/// pair distances for clusters. Instability returns a flagged result.
TrajectoryResult run_trajectory(const TrajectorySpec& spec);

/// Runs cells on up to `workers` threads; result i belongs to cells[i].
std::vector<TrajectoryResult> run_trajectories(const std::vector<TrajectorySpec>& cells,
                                               unsigned workers);

/// Worker count: SAMPLE_WORKERS if set, else hardware concurrency.
unsigned default_workers();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declarative description of a study.
struct ExperimentSpec {
  ModelKind model = ModelKind::Oscillator1D;
  std::vector<std::string> methods{"baoab"};
  std::vector<double> stepsizes{0.1};
  std::vector<double> gammas{1.0};
  double kBT = 1.0;
  double t_total = 1e4;
  double burn_in_fraction = 0.1;
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  BinSpec bins{};
  std::size_t stride = 1;
  // Reference settings for cluster studies; zero/empty picks the default.
  double reference_h = 0.0;
  std::string reference_method;
  double reference_t_total = 0.0;
  std::size_t reference_replicas = 0;
  /// Half-width of the quadrature domain for 1D references.
  double quadrature_L = kDefaultQuadratureDomain;
  /// Sample-count checkpoints for gamma sweeps.
  std::vector<std::uint64_t> checkpoints;

  /// Checks the invariants (positive values, burn-in below one, at least one
  /// step per stepsize, known methods). Throws ConfigError.
  void validate() const;
};

/// The reference a study is scored against.
ReferenceDistribution study_reference(const ExperimentSpec& spec, double gamma,
                                      const std::filesystem::path& cache_dir, unsigned workers);
SimulatedReferenceSpec simulated_reference_spec(const ExperimentSpec& spec, double gamma,
                                                unsigned workers);

struct RunResult {
  std::string method;
  double dt = 0.0;
  double gamma = 0.0;
  /// Empty when any replica diverged.
  std::optional<double> error;
  /// Standard error of the per-replica l1 errors (needs >= 2 replicas).
  std::optional<double> error_stderr;
  std::optional<double> variance;
  bool diverged = false;
  std::uint64_t steps_completed = 0;
  double wall_s = 0.0;
  Histogram merged;
  std::vector<double> replica_errors;
};

struct SlopeResult {
  std::string method;
  double gamma = 0.0;
  std::optional<LineFit> fit;
  std::size_t points = 0;
  std::vector<double> skipped_stepsizes;
};

struct StudyResult {
  std::vector<RunResult> runs;
  std::vector<SlopeResult> slopes;
};

/// Scores one set of replica trajectories for a cell.
RunResult score_cell(const std::string& method, double dt, double gamma,
                     const std::vector<TrajectoryResult>& replicas,
                     const std::vector<double>& reference);

/// Every (method, dt, gamma) cell with merged replicas, per-cell error and
/// ensemble variance, and per-method slopes. Rows are ordered by method (as
/// listed), then dt ascending, then gamma ascending.
StudyResult convergence_study(const ExperimentSpec& spec, const std::filesystem::path& cache_dir,
                              unsigned workers);

/// Fits one slope per (method, gamma) over the non-diverged cells.
std::vector<SlopeResult> fit_slopes(const std::vector<RunResult>& runs);

struct SweepPoint {
  std::string method;
  double dt = 0.0;
  double gamma = 0.0;
  std::uint64_t samples = 0;
  std::optional<double> error;
  std::optional<double> error_stderr;
  bool diverged = false;
};

/// Error at each checkpoint for each (method, gamma) at the study's single stepsize.
std::vector<SweepPoint> gamma_sweep(const ExperimentSpec& spec, const std::filesystem::path& cache_dir,
                                    unsigned workers);

inline constexpr const char* kCsvHeader =
    "model,method,dt,gamma,kBT,t_total,replicas,seed,error,variance,diverged,steps,wall_s";

void emit_csv(std::ostream& out, const ExperimentSpec& spec, const std::vector<RunResult>& runs);
void emit_csv(const std::filesystem::path& path, const ExperimentSpec& spec,
              const std::vector<RunResult>& runs);
void emit_slopes_csv(std::ostream& out, const ExperimentSpec& spec,
                     const std::vector<SlopeResult>& slopes);
void emit_sweep_csv(std::ostream& out, const ExperimentSpec& spec,
                    const std::vector<SweepPoint>& points);

/// One row per bin: bin centre, predicted and empirical log-deviation.
struct TheoryRow {
  std::string method;
  double dt = 0.0;
  double gamma = 0.0;
  double x = 0.0;
  double exact = 0.0;
  double predicted = 0.0;
  std::optional<double> empirical;
};

/// Runs each method at every (dt, gamma) cell of a 1D spec and compares
/// per-bin log(omega / omega_hat) with the predicted marginal correction.
std::vector<TheoryRow> theory_check(const ExperimentSpec& spec, unsigned workers);
void emit_theory_csv(std::ostream& out, const std::vector<TheoryRow>& rows);

}  // namespace langevin
