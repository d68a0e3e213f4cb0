#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace langevin {

/// Raised when two cluster atoms coincide (pair distance below 1e-12).
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for nonpositive or otherwise invalid numeric parameters.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Anything the integrators can push a configuration through.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual std::size_t dimension() const = 0;
  virtual double energy(std::span<const double> x) const = 0;
  /// Writes dU/dx into grad and returns U(x).
  virtual double gradient(std::span<const double> x, std::span<double> grad) const = 0;
};

/// U and its first four derivatives at one point.
struct DerivativeTower1D {
  double u = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  double u4 = 0.0;
};

/// U(x) = x^4/4 + sin(1 + 5x).
DerivativeTower1D oscillator_eval(double x);

struct PairValue {
  double phi = 0.0;
  double dphi = 0.0;
};

struct MorseParams {
  double a = 2.0;
  double r_m = 1.0;
};

struct LJParams {
  double epsilon = 1.0;
  double r_m = 1.0;
  /// Coefficient of the harmonic tether r_k^2 * restraint about the origin.
  double restraint = 1.0 / 8.0;
};

PairValue morse_pair(double r, const MorseParams& params = {});
PairValue lj_pair(double r, const LJParams& params = {});

enum class ModelKind { Oscillator1D, MorseCluster, LJCluster };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

inline constexpr std::size_t kClusterAtoms = 7;
inline constexpr std::size_t kClusterDim = 2 * kClusterAtoms;
inline constexpr double kMinPairDistance = 1e-12;

/// The three benchmark systems. Cluster configurations are flat,
/// atom-major: (x0, y0, x1, y1, ...).
class PotentialModel final : public Potential {
 public:
  static PotentialModel oscillator();
  static PotentialModel morse_cluster(MorseParams params = {});
  static PotentialModel lj_cluster(LJParams params = {});
  static PotentialModel make(ModelKind kind);

  ModelKind kind() const { return kind_; }
  bool is_cluster() const { return kind_ != ModelKind::Oscillator1D; }
  const MorseParams& morse() const { return morse_; }
  const LJParams& lj() const { return lj_; }

  std::size_t dimension() const override;
  double energy(std::span<const double> x) const override;
  double gradient(std::span<const double> x, std::span<double> grad) const override;

  /// Only defined for the 1D oscillator.
  DerivativeTower1D tower(double x) const;

 private:
  explicit PotentialModel(ModelKind kind) : kind_(kind) {}

  double cluster_energy_gradient(std::span<const double> x, double* grad) const;

  ModelKind kind_;
  MorseParams morse_{};
  LJParams lj_{};
};

struct EnergyForce {
  double energy = 0.0;
  std::array<double, kClusterDim> force{};
};

/// Energy and F = -grad U for a 7-atom planar cluster.
EnergyForce cluster_energy_force(const PotentialModel& model, std::span<const double> x);

/// Centre atom at the origin, six atoms on a unit hexagon at 60 degree steps.
std::array<double, kClusterDim> init_hexagon();

/// U(x) = x^2/2 in any dimension.
class HarmonicPotential final : public Potential {
 public:
  explicit HarmonicPotential(std::size_t dim = 1) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  double energy(std::span<const double> x) const override;
  double gradient(std::span<const double> x, std::span<double> grad) const override;

 private:
  std::size_t dim_;
};

/// U = 0.
class FreePotential final : public Potential {
 public:
  explicit FreePotential(std::size_t dim = 1) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  double energy(std::span<const double>) const override { return 0.0; }
  double gradient(std::span<const double>, std::span<double> grad) const override;

 private:
  std::size_t dim_;
};

}  // namespace langevin
