#include "langevin/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace langevin {

DerivativeTower1D oscillator_eval(double x) {
  const double s = std::sin(1.0 + 5.0 * x);
  const double c = std::cos(1.0 + 5.0 * x);
  const double x2 = x * x;
  return {
      .u = 0.25 * x2 * x2 + s,
      .u1 = x2 * x + 5.0 * c,
      .u2 = 3.0 * x2 - 25.0 * s,
      .u3 = 6.0 * x - 125.0 * c,
      .u4 = 6.0 + 625.0 * s,
  };
}

PairValue morse_pair(double r, const MorseParams& params) {
  const double e = std::exp(-params.a * (r - params.r_m));
  const double one_minus = 1.0 - e;
  return {one_minus * one_minus, 2.0 * params.a * one_minus * e};
}

PairValue lj_pair(double r, const LJParams& params) {
  const double s = params.r_m / r;
  const double s2 = s * s;
  const double s6 = s2 * s2 * s2;
  const double s12 = s6 * s6;
  return {params.epsilon * (s12 - 2.0 * s6), 12.0 * params.epsilon * (s6 - s12) / r};
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Oscillator1D:
      return "oscillator";
    case ModelKind::MorseCluster:
      return "morse";
    case ModelKind::LJCluster:
      return "lj";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "oscillator") return ModelKind::Oscillator1D;
  if (name == "morse") return ModelKind::MorseCluster;
  if (name == "lj") return ModelKind::LJCluster;
  throw DomainError("unknown model '" + name + "' (expected oscillator, morse or lj)");
}

PotentialModel PotentialModel::oscillator() { return PotentialModel(ModelKind::Oscillator1D); }

PotentialModel PotentialModel::morse_cluster(MorseParams params) {
  PotentialModel m(ModelKind::MorseCluster);
  m.morse_ = params;
  return m;
}

PotentialModel PotentialModel::lj_cluster(LJParams params) {
  PotentialModel m(ModelKind::LJCluster);
  m.lj_ = params;
  return m;
}

PotentialModel PotentialModel::make(ModelKind kind) {
  switch (kind) {
    case ModelKind::Oscillator1D:
      return oscillator();
    case ModelKind::MorseCluster:
      return morse_cluster();
    case ModelKind::LJCluster:
      return lj_cluster();
  }
  throw DomainError("unknown model kind");
}

std::size_t PotentialModel::dimension() const {
  return kind_ == ModelKind::Oscillator1D ? 1 : kClusterDim;
}

double PotentialModel::energy(std::span<const double> x) const {
  if (kind_ == ModelKind::Oscillator1D) return oscillator_eval(x[0]).u;
  return cluster_energy_gradient(x, nullptr);
}

double PotentialModel::gradient(std::span<const double> x, std::span<double> grad) const {
  if (kind_ == ModelKind::Oscillator1D) {
    const double s = std::sin(1.0 + 5.0 * x[0]);
    const double c = std::cos(1.0 + 5.0 * x[0]);
    const double x2 = x[0] * x[0];
    grad[0] = x2 * x[0] + 5.0 * c;
    return 0.25 * x2 * x2 + s;
  }
  return cluster_energy_gradient(x, grad.data());
}

DerivativeTower1D PotentialModel::tower(double x) const {
  if (kind_ != ModelKind::Oscillator1D) {
    throw DomainError("derivative tower is only available for the 1D oscillator");
  }
  return oscillator_eval(x);
}

double PotentialModel::cluster_energy_gradient(std::span<const double> x, double* grad) const {
  if (x.size() != kClusterDim) {
    throw DomainError("cluster configuration must have 14 coordinates");
  }
  if (grad != nullptr) std::fill(grad, grad + kClusterDim, 0.0);
  const bool lj = kind_ == ModelKind::LJCluster;
  double u = 0.0;
  for (std::size_t i = 0; i < kClusterAtoms; ++i) {
    for (std::size_t j = i + 1; j < kClusterAtoms; ++j) {
      const double dx = x[2 * i] - x[2 * j];
      const double dy = x[2 * i + 1] - x[2 * j + 1];
      const double r = std::sqrt(dx * dx + dy * dy);
      if (!(r >= kMinPairDistance)) {
        throw DegenerateConfiguration("atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                      " coincide (r = " + std::to_string(r) + ")");
      }
      const PairValue pv = lj ? lj_pair(r, lj_) : morse_pair(r, morse_);
      u += pv.phi;
      if (grad != nullptr) {
        const double scale = pv.dphi / r;
        grad[2 * i] += scale * dx;
        grad[2 * i + 1] += scale * dy;
        grad[2 * j] -= scale * dx;
        grad[2 * j + 1] -= scale * dy;
      }
    }
  }
  if (lj) {
    const double k = lj_.restraint;
    for (std::size_t i = 0; i < kClusterDim; ++i) {
      u += k * x[i] * x[i];
      if (grad != nullptr) grad[i] += 2.0 * k * x[i];
    }
  }
  return u;
}

EnergyForce cluster_energy_force(const PotentialModel& model, std::span<const double> x) {
  if (!model.is_cluster()) throw DomainError("cluster_energy_force needs a cluster model");
  EnergyForce out;
  out.energy = model.gradient(x, out.force);
  for (double& f : out.force) f = -f;
  return out;
}

std::array<double, kClusterDim> init_hexagon() {
  std::array<double, kClusterDim> x{};
  for (std::size_t k = 1; k < kClusterAtoms; ++k) {
    const double angle = static_cast<double>(k - 1) * std::numbers::pi / 3.0;
    x[2 * k] = std::cos(angle);
    x[2 * k + 1] = std::sin(angle);
  }
  return x;
}

double HarmonicPotential::energy(std::span<const double> x) const {
  double u = 0.0;
  for (double v : x) u += 0.5 * v * v;
  return u;
}

double HarmonicPotential::gradient(std::span<const double> x, std::span<double> grad) const {
  for (std::size_t i = 0; i < x.size(); ++i) grad[i] = x[i];
  return energy(x);
}

double FreePotential::gradient(std::span<const double>, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  return 0.0;
}

}  // namespace langevin
