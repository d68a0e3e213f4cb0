#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "langevin/model.hpp"
#include "langevin/rng.hpp"

namespace langevin {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground-truth bin probabilities and where they came from.
struct ReferenceDistribution {
  std::vector<double> edges;
  std::vector<double> probabilities;
  std::vector<std::string> meta;
};

/// A 1D density exp(-beta U) together with a certified bound on
/// the mass outside [-L, L].
struct GibbsTarget1D {
  std::function<double(double)> energy;
  /// Upper bound on the integral of exp(-beta U) over |x| > L. Zero means the
  /// target is defined on [-L, L] only.
  std::function<double(double beta, double L)> tail_bound;
  std::string name;
};

/// U = x^4/4 + sin(1+5x); tail bound from U >= x^4/4 - 1.
GibbsTarget1D oscillator_target();
/// U = x^2/2.
GibbsTarget1D harmonic_target();
/// U = 0 restricted to [-L, L].
GibbsTarget1D flat_target();

enum class QuadratureRule { AdaptiveSimpson, GaussLegendrePanels };

/// Integral of exp(-beta U) over [a, b] to the given absolute tolerance.
/// Throws QuadratureError when the adaptive rule cannot meet it.
double integrate_boltzmann(const GibbsTarget1D& target, double beta, double a, double b,
                           QuadratureRule rule = QuadratureRule::AdaptiveSimpson,
                           double abs_tol = 1e-12);

inline constexpr double kDefaultQuadratureDomain = 6.0;
inline constexpr double kTailTolerance = 1e-12;

/// Per-bin probabilities of Z^-1 exp(-beta U), normalised over [-L, L].
/// Requires L >= max |edge|. Throws QuadratureError if the certified tail mass
/// beyond L is not below 1e-12 of the total.
ReferenceDistribution quadrature_bin_probabilities(
    const GibbsTarget1D& target, double beta, const std::vector<double>& edges,
    double L = kDefaultQuadratureDomain, QuadratureRule rule = QuadratureRule::AdaptiveSimpson);

/// Exact draws from a 1D Gibbs density by inverting a tabulated CDF
/// (piecewise-constant density on a fine grid over [-L, L]).
class GibbsSampler1D {
 public:
  GibbsSampler1D(const GibbsTarget1D& target, double beta, double L = kDefaultQuadratureDomain,
                 std::size_t cells = 1 << 18);

  double sample(NoiseStream& stream) const;
  double sample_uniform(double u) const;

 private:
  double lo_;
  double width_;
  std::vector<double> cdf_;
};

/// Parameters of a simulated cluster reference.
struct SimulatedReferenceSpec {
  ModelKind model = ModelKind::MorseCluster;
  std::string method = "baoab";
  double kBT = 0.1;
  double gamma = 1.0;
  double h_ref = 0.001;
  double t_total = 1e3;
  double burn_in_fraction = 0.1;
  std::size_t replicas = 1;
  std::size_t stride = 1;
  std::uint64_t seed = 1;
  std::size_t bins = 20;
  double lo = 0.5;
  double hi = 2.5;
  /// Smallest stepsize of the study the reference serves; h_ref must not exceed a third of it.
  double smallest_study_step = 0.0;
  unsigned workers = 1;
};

/// G(r) frequencies from a long run at h_ref.
ReferenceDistribution simulated_reference_rdf(const SimulatedReferenceSpec& spec);

/// Stable 64-bit FNV-1a of the canonical parameter text; names the cache file.
std::uint64_t reference_key(const SimulatedReferenceSpec& spec);

/// Loads `ref-<key>.txt` from cache_dir, or computes and stores it.
ReferenceDistribution cached_simulated_reference(const SimulatedReferenceSpec& spec,
                                                 const std::filesystem::path& cache_dir);

/// Same layout as histogram files, probabilities in place of counts, plus
/// `# meta:` lines.
void write_reference(std::ostream& out, const ReferenceDistribution& ref);
ReferenceDistribution read_reference(std::istream& in);

}  // namespace langevin
