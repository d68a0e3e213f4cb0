#include "langevin/reference.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "langevin/harness.hpp"
#include "langevin/stats.hpp"

namespace langevin {

GibbsTarget1D oscillator_target() {
  return {
      [](double x) { return oscillator_eval(x).u; },
      // U >= x^4/4 - 1 and x^3/L^3 >= 1 on the tail give
      // int_L^inf e^{-beta U} <= e^beta e^{-beta L^4/4} / (beta L^3), doubled for both tails.
      [](double beta, double L) {
        return 2.0 * std::exp(beta - beta * L * L * L * L / 4.0) / (beta * L * L * L);
      },
      "oscillator",
  };
}

GibbsTarget1D harmonic_target() {
  return {
      [](double x) { return 0.5 * x * x; },
      [](double beta, double L) { return 2.0 * std::exp(-beta * L * L / 2.0) / (beta * L); },
      "harmonic",
  };
}

GibbsTarget1D flat_target() {
  return {[](double) { return 0.0; }, [](double, double) { return 0.0; }, "flat"};
}

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  int max_depth;
  bool failed = false;
};

double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth) {
    st.failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  constexpr int kPanels = 64;
  SimpsonState st{&f, 40};
  double total = 0.0;
  const double width = (b - a) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + width * k;
    const double hi = k + 1 == kPanels ? b : a + width * (k + 1);
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_recurse(st, lo, hi, fa, fm, fb, whole, tol / kPanels, 0);
  }
  if (st.failed) {
    throw QuadratureError("adaptive Simpson did not reach tolerance on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  return total;
}

double gauss_panels(const std::function<double(double)>& f, double a, double b) {
  // 20-point Gauss-Legendre on panels no wider than 1/64.
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * 64.0)));
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + width * k;
    const double hi = k + 1 == panels ? b : a + width * (k + 1);
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
  }
  return total;
}

}  // namespace

double integrate_boltzmann(const GibbsTarget1D& target, double beta, double a, double b,
                           QuadratureRule rule, double abs_tol) {
  if (!(b > a)) return 0.0;
  const std::function<double(double)> weight = [&](double x) {
    return std::exp(-beta * target.energy(x));
  };
  return rule == QuadratureRule::AdaptiveSimpson ? adaptive_simpson(weight, a, b, abs_tol)
                                                 : gauss_panels(weight, a, b);
}

ReferenceDistribution quadrature_bin_probabilities(const GibbsTarget1D& target, double beta,
                                                   const std::vector<double>& edges, double L,
                                                   QuadratureRule rule) {
  if (!(beta > 0.0)) throw DomainError("quadrature: beta must be positive");
  if (edges.size() < 2) throw DomainError("quadrature: need at least two edges");
  if (!(L >= std::abs(edges.front()) && L >= std::abs(edges.back()))) {
    throw DomainError("quadrature: domain half-width L must cover every edge");
  }
  std::vector<double> mass(edges.size() - 1);
  double z = integrate_boltzmann(target, beta, -L, edges.front(), rule) +
             integrate_boltzmann(target, beta, edges.back(), L, rule);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    mass[i] = integrate_boltzmann(target, beta, edges[i], edges[i + 1], rule);
    z += mass[i];
  }
  const double tail = target.tail_bound(beta, L);
  if (!(tail < kTailTolerance * z)) {
    throw QuadratureError("quadrature: tail mass beyond L = " + format_double(L) +
                          " is not certified below 1e-12 (bound " + format_double(tail / z) + ")");
  }
  ReferenceDistribution ref;
  ref.edges = edges;
  ref.probabilities.resize(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) ref.probabilities[i] = mass[i] / z;
  ref.meta = {
      "source: quadrature",
      "target: " + target.name,
      "beta: " + format_double(beta),
      "domain: " + format_double(-L) + " " + format_double(L),
      std::string("rule: ") +
          (rule == QuadratureRule::AdaptiveSimpson ? "adaptive-simpson" : "gauss-legendre-panels"),
      "abs_tol: 1e-12",
      "tail_bound_relative: " + format_double(tail / z),
  };
  return ref;
}

GibbsSampler1D::GibbsSampler1D(const GibbsTarget1D& target, double beta, double L, std::size_t cells)
    : lo_(-L), width_(2.0 * L / static_cast<double>(cells)), cdf_(cells + 1, 0.0) {
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = lo_ + width_ * static_cast<double>(i);
    const double mass = boost::math::quadrature::gauss<double, 7>::integrate(
        [&](double x) { return std::exp(-beta * target.energy(x)); }, a, a + width_);
    cdf_[i + 1] = cdf_[i] + mass;
  }
  const double z = cdf_.back();
  for (double& c : cdf_) c /= z;
}

double GibbsSampler1D::sample_uniform(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), 1,
                                                cdf_.size() - 1) - 1;
  const double span = cdf_[i + 1] - cdf_[i];
  const double frac = span > 0.0 ? (u - cdf_[i]) / span : 0.5;
  return lo_ + width_ * (static_cast<double>(i) + frac);
}

double GibbsSampler1D::sample(NoiseStream& stream) const {
  // One normal draw per sample, mapped through its CDF.
  const double z = stream.next_normal();
  return sample_uniform(0.5 * std::erfc(-z / std::sqrt(2.0)));
}

namespace {

std::string canonical_text(const SimulatedReferenceSpec& spec) {
  std::ostringstream ss;
  ss << "model=" << to_string(spec.model) << ";method=" << spec.method
     << ";kBT=" << format_double(spec.kBT) << ";gamma=" << format_double(spec.gamma)
     << ";h_ref=" << format_double(spec.h_ref) << ";t_total=" << format_double(spec.t_total)
     << ";burn_in=" << format_double(spec.burn_in_fraction) << ";replicas=" << spec.replicas
     << ";stride=" << spec.stride << ";seed=" << spec.seed << ";bins=" << spec.bins
     << ";lo=" << format_double(spec.lo) << ";hi=" << format_double(spec.hi);
  return ss.str();
}

}  // namespace

std::uint64_t reference_key(const SimulatedReferenceSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_text(spec)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ReferenceDistribution simulated_reference_rdf(const SimulatedReferenceSpec& spec) {
  if (spec.model == ModelKind::Oscillator1D) {
    throw DomainError("simulated references are for cluster models; use quadrature in 1D");
  }
  if (!(spec.h_ref > 0.0)) throw DomainError("h_ref must be positive");
  if (spec.smallest_study_step > 0.0 && spec.h_ref > spec.smallest_study_step / 3.0) {
    throw DomainError("h_ref must be at most a third of the smallest study stepsize");
  }
  if (spec.replicas == 0) throw DomainError("reference needs at least one replica");

  std::vector<TrajectorySpec> cells;
  for (std::size_t r = 0; r < spec.replicas; ++r) {
    TrajectorySpec t;
    t.model = spec.model;
    t.method = spec.method;
    t.params = {spec.h_ref, spec.gamma, spec.kBT};
    t.t_total = spec.t_total;
    t.burn_in_fraction = spec.burn_in_fraction;
    t.stride = spec.stride;
    t.bins = {spec.bins, spec.lo, spec.hi};
    t.seed = spec.seed;
    t.stream_id = r;
    cells.push_back(t);
  }
  const auto results = run_trajectories(cells, spec.workers);
  Histogram merged = Histogram::uniform(spec.bins, spec.lo, spec.hi);
  for (const auto& res : results) {
    if (res.diverged) {
      throw DomainError("reference trajectory diverged at h_ref = " + format_double(spec.h_ref));
    }
    merged.merge(res.histogram);
  }
  ReferenceDistribution ref;
  ref.edges = merged.edges();
  ref.probabilities = merged.frequencies();
  ref.meta = {
      "source: simulation",
      "parameters: " + canonical_text(spec),
      "samples: " + std::to_string(merged.total_samples()),
  };
  return ref;
}

ReferenceDistribution cached_simulated_reference(const SimulatedReferenceSpec& spec,
                                                 const std::filesystem::path& cache_dir) {
  char name[32];
  std::snprintf(name, sizeof(name), "ref-%016llx.txt",
                static_cast<unsigned long long>(reference_key(spec)));
  const auto path = cache_dir / name;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read reference cache file '" + path.string() + "'");
    return read_reference(in);
  }
  auto ref = simulated_reference_rdf(spec);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write reference cache file '" + path.string() + "'");
  write_reference(out, ref);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
  return ref;
}

void write_reference(std::ostream& out, const ReferenceDistribution& ref) {
  out << "# edges:";
  for (double e : ref.edges) out << ' ' << format_double(e);
  std::string samples = "0";
  for (const auto& m : ref.meta) {
    if (m.starts_with("samples: ")) samples = m.substr(9);
  }
  out << "\n# total: " << samples << '\n';
  for (const auto& m : ref.meta) out << "# meta: " << m << '\n';
  for (std::size_t i = 0; i < ref.probabilities.size(); ++i) {
    out << i << ' ' << format_double(ref.probabilities[i]) << '\n';
  }
}

ReferenceDistribution read_reference(std::istream& in) {
  ReferenceDistribution ref;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# edges:")) {
      std::istringstream ss(line.substr(8));
      double e;
      while (ss >> e) ref.edges.push_back(e);
    } else if (line.starts_with("# meta: ")) {
      ref.meta.push_back(line.substr(8));
    } else if (line.starts_with("#")) {
      continue;
    } else {
      std::istringstream ss(line);
      std::size_t index;
      double p;
      if (!(ss >> index >> p) || index != ref.probabilities.size()) {
        throw StatsError("malformed reference row: '" + line + "'");
      }
      ref.probabilities.push_back(p);
    }
  }
  if (ref.edges.size() != ref.probabilities.size() + 1) {
    throw StatsError("reference file: edges and probabilities disagree");
  }
  return ref;
}

}  // namespace langevin
