#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "langevin/model.hpp"
#include "langevin/rng.hpp"

namespace langevin {

/// Positions, momenta and diagonal masses. Brownian schemes ignore p.
struct PhaseState {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> masses;

  /// Zero positions and momenta, unit masses.
  static PhaseState zeros(std::size_t dim);
  std::size_t dimension() const { return x.size(); }
};

/// Coefficients of the exact Ornstein-Uhlenbeck solve over one step.
struct OUCoefficients {
  double c1 = 1.0;  // e^{-gamma dt}
  double c2 = 0.0;  // (1 - c1) / gamma
  double c3 = 0.0;  // sqrt(kBT (1 - c1^2))
};

/// Throws DomainError unless all three inputs are positive. c1 underflows to
/// exactly 0 once gamma*dt exceeds ~745.
OUCoefficients ou_coefficients(double gamma, double dt, double kBT);

struct LangevinParams {
  double dt = 0.1;
  double gamma = 1.0;
  double kBT = 1.0;
};

enum class StepStatus { Ok, Diverged };

/// Coordinates beyond this magnitude (or non-finite) mark a trajectory unstable.
inline constexpr double kDivergenceThreshold = 1e100;

bool is_diverged(const PhaseState& s);

/// Per-trajectory scratch: the force cache, the force-evaluation counter and
/// a noise buffer. The gradient is reused whenever it is requested at a
/// configuration bit-identical to the last one evaluated, so a step that
/// kicks twice at the same x (or opens with the previous step's closing
/// kick) costs one evaluation.
class StepContext {
 public:
  explicit StepContext(const Potential& model);

  std::span<const double> gradient(std::span<const double> x);
  std::span<double> noise(std::size_t n);

  const Potential& model() const { return *model_; }
  std::uint64_t force_evaluations() const { return evaluations_; }
  void invalidate() { valid_ = false; }

 private:
  const Potential* model_;
  std::vector<double> cached_x_;
  std::vector<double> cached_grad_;
  std::vector<double> noise_;
  bool valid_ = false;
  std::uint64_t evaluations_ = 0;
};

/// Holds the Gaussian draw shared by consecutive steps of the colored-noise
/// schemes (BBK and the BAOAB limit method).
struct ColoredNoiseCache {
  std::vector<double> previous_R;
  bool primed = false;

  void prime(NoiseStream& stream, std::size_t dim);
};

// Elementary flows. Each solves its piece of the Langevin vector field exactly.
void a_flow(PhaseState& s, double t);
void b_flow(PhaseState& s, double t, StepContext& ctx);
void o_flow(PhaseState& s, const OUCoefficients& coeffs, NoiseStream& stream, StepContext& ctx);

/// A word over {A, B, O}. Every occurrence of a letter runs for dt divided by
/// the number of times that letter appears, so "BAOAB" is
/// B(dt/2) A(dt/2) O(dt) A(dt/2) B(dt/2).
class SplittingScheme {
 public:
  SplittingScheme(std::string letters, LangevinParams params);

  const std::string& letters() const { return letters_; }
  const LangevinParams& params() const { return params_; }

  /// Substep duration for each letter, in order.
  std::vector<double> durations() const;

  StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) const;

 private:
  struct Op {
    char letter;
    double duration;
    OUCoefficients ou;
  };

  std::string letters_;
  LangevinParams params_;
  std::vector<Op> ops_;
};

/// Validates the letters and precomputes substep durations and OU coefficients.
SplittingScheme compose_splitting(std::string_view letters, LangevinParams params);

// The Langevin schemes, written out statement by statement.
StepStatus step_baoab(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                      const OUCoefficients& coeffs, NoiseStream& stream);
StepStatus step_aboba(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                      const OUCoefficients& coeffs, NoiseStream& stream);
StepStatus step_spv(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                    const OUCoefficients& coeffs, NoiseStream& stream);
/// Brunger-Brooks-Karplus. The Gaussian drawn for the closing half kick of
/// step n is reused by the opening half kick of step n+1 (cache primed on the
/// first call).
StepStatus step_bbk(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                    ColoredNoiseCache& cache, NoiseStream& stream);

// Brownian dynamics. Only s.x and s.masses are touched.
StepStatus step_euler_maruyama(PhaseState& s, StepContext& ctx, double h, double kBT,
                               NoiseStream& stream);
/// x <- x - h M^-1 grad U(x) + sqrt(kBT h / 2) M^-1/2 (R_prev + R_new).
StepStatus step_baoab_limit(PhaseState& s, StepContext& ctx, ColoredNoiseCache& cache, double h,
                            double kBT, NoiseStream& stream);

/// A stateful one-trajectory integrator selected by name.
class Integrator {
 public:
  virtual ~Integrator() = default;

  const std::string& name() const { return name_; }
  /// True for the Langevin schemes, false for the Brownian ones.
  virtual bool uses_momenta() const { return true; }
  virtual StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) = 0;

 protected:
  explicit Integrator(std::string name) : name_(std::move(name)) {}

 private:
  std::string name_;
};

/// Accepts baoab, aboba, spv, bbk, euler-maruyama, baoab-limit and
/// split:<LETTERS>. For the Brownian schemes params.dt is the step h and
/// gamma is ignored.
std::unique_ptr<Integrator> make_integrator(const std::string& method, const LangevinParams& params);

bool is_known_method(const std::string& method);
bool is_brownian_method(const std::string& method);

}  // namespace langevin
