#include "langevin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "langevin/theory.hpp"

namespace langevin {

std::uint64_t step_count(double t_total, double dt) {
  if (!(t_total > 0.0) || !(dt > 0.0)) throw DomainError("t_total and dt must be positive");
  const double steps = std::round(t_total / dt);
  if (steps < 1.0) throw DomainError("t_total / dt rounds to zero steps");
  return static_cast<std::uint64_t>(steps);
}

std::uint64_t burn_in_steps(std::uint64_t steps, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw DomainError("burn_in_fraction must be in [0, 1)");
  return static_cast<std::uint64_t>(std::floor(fraction * static_cast<double>(steps) + 1e-9));
}

TrajectoryResult run_trajectory(const TrajectorySpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const PotentialModel model = PotentialModel::make(spec.model);
  auto integrator = make_integrator(spec.method, spec.params);
  if (spec.stride == 0) throw DomainError("stride must be positive");

  PhaseState s = PhaseState::zeros(model.dimension());
  if (model.is_cluster()) {
    const auto hex = init_hexagon();
    s.x.assign(hex.begin(), hex.end());
  }
  NoiseStream stream(spec.seed, spec.stream_id);
  if (integrator->uses_momenta()) {
    for (std::size_t i = 0; i < s.p.size(); ++i) {
      s.p[i] = std::sqrt(spec.params.kBT * s.masses[i]) * stream.next_normal();
    }
  }
  StepContext ctx(model);

  TrajectoryResult out;
  out.histogram = Histogram::uniform(spec.bins.count, spec.bins.lo, spec.bins.hi);
  out.steps_planned = step_count(spec.t_total, spec.params.dt);
  const std::uint64_t burn = burn_in_steps(out.steps_planned, spec.burn_in_fraction);

  std::vector<std::uint64_t> checkpoints = spec.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  std::size_t next_checkpoint = 0;
  const auto snapshot_due = [&] {
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == out.samples_binned) {
      out.checkpoint_histograms.push_back(out.histogram);
      ++next_checkpoint;
    }
  };
  snapshot_due();

  for (std::uint64_t k = 1; k <= out.steps_planned; ++k) {
    StepStatus status;
    try {
      status = integrator->step(s, ctx, stream);
    } catch (const DegenerateConfiguration& e) {
      out.diverged = true;
      out.divergence_reason = e.what();
      break;
    }
    if (status == StepStatus::Diverged) {
      out.diverged = true;
      out.divergence_reason = "unstable at this stepsize (|coordinate| > 1e100 or non-finite)";
      break;
    }
    out.steps_completed = k;
    if (k > burn && (k - burn) % spec.stride == 0) {
      if (model.is_cluster()) {
        rdf_accumulate(out.histogram, s.x);
      } else {
        out.histogram.add(s.x[0]);
      }
      ++out.samples_binned;
      snapshot_due();
    }
  }
  out.force_evaluations = ctx.force_evaluations();
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("SAMPLE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TrajectoryResult> run_trajectories(const std::vector<TrajectorySpec>& cells,
                                               unsigned workers) {
  std::vector<TrajectoryResult> results(cells.size());
  if (cells.empty()) return results;
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(cells.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = run_trajectory(cells[i]);
    } catch (...) {
      errors[w] = std::current_exception();
      next = cells.size();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void ExperimentSpec::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (methods.empty()) fail("methods must list at least one method");
  for (const auto& m : methods) {
    if (!is_known_method(m)) fail("unknown method '" + m + "'");
  }
  if (stepsizes.empty()) fail("stepsizes must not be empty");
  if (gammas.empty()) fail("gamma must not be empty");
  for (double g : gammas) {
    if (!(g > 0.0)) fail("gamma values must be positive");
  }
  if (!(kBT > 0.0)) fail("kBT must be positive");
  if (!(t_total > 0.0)) fail("t_total must be positive");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) fail("burn_in_fraction must be in [0, 1)");
  if (replicas == 0) fail("replicas must be at least 1");
  if (stride == 0) fail("stride must be at least 1");
  if (bins.count == 0 || !(bins.hi > bins.lo)) fail("bins need count >= 1 and hi > lo");
  for (double dt : stepsizes) {
    if (!(dt > 0.0)) fail("stepsizes must be positive");
    const double steps = std::round(t_total / dt);
    if (steps < 1.0) fail("t_total / " + format_double(dt) + " gives no steps");
    if (burn_in_steps(static_cast<std::uint64_t>(steps), burn_in_fraction) >=
        static_cast<std::uint64_t>(steps)) {
      fail("burn-in consumes every step at dt = " + format_double(dt));
    }
  }
  if (model == ModelKind::Oscillator1D &&
      !(quadrature_L >= std::abs(bins.lo) && quadrature_L >= std::abs(bins.hi))) {
    fail("quadrature.L must cover the bin range");
  }
  if (reference_h < 0.0 || reference_t_total < 0.0) fail("reference settings must be nonnegative");
  if (!reference_method.empty() && !is_known_method(reference_method)) {
    fail("unknown reference.method '" + reference_method + "'");
  }
}

SimulatedReferenceSpec simulated_reference_spec(const ExperimentSpec& spec, double gamma,
                                                unsigned workers) {
  SimulatedReferenceSpec ref;
  ref.model = spec.model;
  const bool brownian = std::all_of(spec.methods.begin(), spec.methods.end(), is_brownian_method);
  ref.method = !spec.reference_method.empty() ? spec.reference_method
               : brownian                    ? "baoab-limit"
                                             : "baoab";
  ref.kBT = spec.kBT;
  ref.gamma = gamma;
  ref.h_ref = spec.reference_h > 0.0                   ? spec.reference_h
              : spec.model == ModelKind::LJCluster     ? 0.00025
                                                       : 0.001;
  ref.t_total = spec.reference_t_total > 0.0 ? spec.reference_t_total : spec.t_total;
  ref.burn_in_fraction = spec.burn_in_fraction;
  ref.replicas = spec.reference_replicas > 0 ? spec.reference_replicas : spec.replicas;
  ref.stride = spec.stride;
  ref.seed = spec.seed ^ 0x9E3779B97F4A7C15ull;
  ref.bins = spec.bins.count;
  ref.lo = spec.bins.lo;
  ref.hi = spec.bins.hi;
  ref.smallest_study_step = *std::min_element(spec.stepsizes.begin(), spec.stepsizes.end());
  ref.workers = workers;
  return ref;
}

ReferenceDistribution study_reference(const ExperimentSpec& spec, double gamma,
                                      const std::filesystem::path& cache_dir, unsigned workers) {
  if (spec.model == ModelKind::Oscillator1D) {
    const Histogram h = Histogram::uniform(spec.bins.count, spec.bins.lo, spec.bins.hi);
    return quadrature_bin_probabilities(oscillator_target(), 1.0 / spec.kBT, h.edges(),
                                        spec.quadrature_L);
  }
  return cached_simulated_reference(simulated_reference_spec(spec, gamma, workers), cache_dir);
}

RunResult score_cell(const std::string& method, double dt, double gamma,
                     const std::vector<TrajectoryResult>& replicas,
                     const std::vector<double>& reference) {
  RunResult r;
  r.method = method;
  r.dt = dt;
  r.gamma = gamma;
  r.steps_completed = replicas.empty() ? 0 : replicas.front().steps_completed;
  std::vector<std::vector<double>> freqs;
  for (const auto& t : replicas) {
    r.diverged = r.diverged || t.diverged;
    r.steps_completed = std::min(r.steps_completed, t.steps_completed);
    r.wall_s += t.wall_s;
    r.merged.merge(t.histogram);
  }
  if (r.diverged) return r;
  for (const auto& t : replicas) {
    freqs.push_back(t.histogram.frequencies());
    r.replica_errors.push_back(l1_bin_error(freqs.back(), reference));
  }
  r.error = l1_bin_error(r.merged, reference);
  if (replicas.size() >= 2) {
    r.variance = ensemble_variance(freqs);
    const double n = static_cast<double>(r.replica_errors.size());
    double mean = 0.0;
    for (double e : r.replica_errors) mean += e / n;
    double ss = 0.0;
    for (double e : r.replica_errors) ss += (e - mean) * (e - mean);
    r.error_stderr = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

std::vector<SlopeResult> fit_slopes(const std::vector<RunResult>& runs) {
  std::vector<SlopeResult> out;
  for (const auto& run : runs) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const SlopeResult& s) {
      return s.method == run.method && s.gamma == run.gamma;
    });
    if (!seen) out.push_back({run.method, run.gamma, std::nullopt, 0, {}});
  }
  for (auto& slope : out) {
    std::vector<double> dts, errs;
    for (const auto& run : runs) {
      if (run.method != slope.method || run.gamma != slope.gamma) continue;
      if (run.diverged || !run.error || !(*run.error > 0.0)) {
        slope.skipped_stepsizes.push_back(run.dt);
        continue;
      }
      dts.push_back(run.dt);
      errs.push_back(*run.error);
    }
    slope.points = dts.size();
    if (dts.size() >= 3) slope.fit = fit_loglog_slope(dts, errs);
  }
  return out;
}

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

TrajectorySpec cell_spec(const ExperimentSpec& spec, const std::string& method, double dt,
                         double gamma, std::size_t replica) {
  TrajectorySpec t;
  t.model = spec.model;
  t.method = method;
  t.params = {dt, gamma, spec.kBT};
  t.t_total = spec.t_total;
  t.burn_in_fraction = spec.burn_in_fraction;
  t.stride = spec.stride;
  t.bins = spec.bins;
  t.seed = spec.seed;
  t.stream_id = replica;
  t.checkpoints = spec.checkpoints;
  return t;
}

class ReferenceCache {
 public:
  ReferenceCache(const ExperimentSpec& spec, std::filesystem::path dir, unsigned workers)
      : spec_(spec), dir_(std::move(dir)), workers_(workers) {}

  const std::vector<double>& probabilities(double gamma) {
    // 1D references do not depend on gamma.
    const double key = spec_.model == ModelKind::Oscillator1D ? 0.0 : gamma;
    auto it = refs_.find(key);
    if (it == refs_.end()) {
      it = refs_.emplace(key, study_reference(spec_, gamma, dir_, workers_).probabilities).first;
    }
    return it->second;
  }

 private:
  const ExperimentSpec& spec_;
  std::filesystem::path dir_;
  unsigned workers_;
  std::map<double, std::vector<double>> refs_;
};

}  // namespace

StudyResult convergence_study(const ExperimentSpec& spec, const std::filesystem::path& cache_dir,
                              unsigned workers) {
  spec.validate();
  ExperimentSpec run_spec = spec;
  run_spec.checkpoints.clear();
  const auto dts = sorted_unique(spec.stepsizes);
  const auto gammas = sorted_unique(spec.gammas);

  struct Key {
    std::string method;
    double dt;
    double gamma;
  };
  std::vector<Key> keys;
  std::vector<TrajectorySpec> cells;
  for (const auto& method : spec.methods) {
    for (double dt : dts) {
      for (double gamma : gammas) {
        keys.push_back({method, dt, gamma});
        for (std::size_t r = 0; r < spec.replicas; ++r) {
          cells.push_back(cell_spec(run_spec, method, dt, gamma, r));
        }
      }
    }
  }
  const auto results = run_trajectories(cells, workers);

  ReferenceCache refs(spec, cache_dir, workers);
  StudyResult study;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const std::vector<TrajectoryResult> reps(results.begin() + static_cast<long>(k * spec.replicas),
                                             results.begin() + static_cast<long>((k + 1) * spec.replicas));
    study.runs.push_back(
        score_cell(keys[k].method, keys[k].dt, keys[k].gamma, reps, refs.probabilities(keys[k].gamma)));
  }
  study.slopes = fit_slopes(study.runs);
  return study;
}

std::vector<SweepPoint> gamma_sweep(const ExperimentSpec& spec, const std::filesystem::path& cache_dir,
                                    unsigned workers) {
  spec.validate();
  if (spec.stepsizes.size() != 1) throw ConfigError("gamma-sweep needs exactly one stepsize");
  if (spec.checkpoints.empty()) throw ConfigError("gamma-sweep needs checkpoints");
  const double dt = spec.stepsizes.front();
  const std::uint64_t steps = step_count(spec.t_total, dt);
  const std::uint64_t binned = (steps - burn_in_steps(steps, spec.burn_in_fraction)) / spec.stride;
  auto checkpoints = spec.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.back() > binned) {
    throw ConfigError("checkpoint " + std::to_string(checkpoints.back()) + " exceeds the " +
                      std::to_string(binned) + " samples a trajectory produces");
  }
  ExperimentSpec run_spec = spec;
  run_spec.checkpoints = checkpoints;
  const auto gammas = sorted_unique(spec.gammas);

  std::vector<TrajectorySpec> cells;
  for (const auto& method : spec.methods) {
    for (double gamma : gammas) {
      for (std::size_t r = 0; r < spec.replicas; ++r) {
        cells.push_back(cell_spec(run_spec, method, dt, gamma, r));
      }
    }
  }
  const auto results = run_trajectories(cells, workers);

  ReferenceCache refs(spec, cache_dir, workers);
  std::vector<SweepPoint> points;
  std::size_t base = 0;
  for (const auto& method : spec.methods) {
    for (double gamma : gammas) {
      for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        SweepPoint pt{method, dt, gamma, checkpoints[c], std::nullopt, std::nullopt, false};
        std::vector<TrajectoryResult> reps;
        for (std::size_t r = 0; r < spec.replicas; ++r) {
          const auto& res = results[base + r];
          if (c >= res.checkpoint_histograms.size()) {
            pt.diverged = true;
            continue;
          }
          TrajectoryResult snap;
          snap.histogram = res.checkpoint_histograms[c];
          reps.push_back(std::move(snap));
        }
        if (!pt.diverged && checkpoints[c] > 0) {
          const RunResult scored = score_cell(method, dt, gamma, reps, refs.probabilities(gamma));
          pt.error = scored.error;
          pt.error_stderr = scored.error_stderr;
        }
        points.push_back(pt);
      }
      base += spec.replicas;
    }
  }
  return points;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

void emit_csv(std::ostream& out, const ExperimentSpec& spec, const std::vector<RunResult>& runs) {
  out << kCsvHeader << '\n';
  for (const auto& r : runs) {
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", r.wall_s);
    out << to_string(spec.model) << ',' << r.method << ',' << format_double(r.dt) << ','
        << format_double(r.gamma) << ',' << format_double(spec.kBT) << ','
        << format_double(spec.t_total) << ',' << spec.replicas << ',' << spec.seed << ','
        << (r.diverged ? "NA" : opt(r.error)) << ',' << (r.diverged ? "NA" : opt(r.variance)) << ','
        << (r.diverged ? "true" : "false") << ',' << r.steps_completed << ',' << wall << '\n';
  }
}

void emit_csv(const std::filesystem::path& path, const ExperimentSpec& spec,
              const std::vector<RunResult>& runs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  emit_csv(out, spec, runs);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void emit_slopes_csv(std::ostream& out, const ExperimentSpec& spec,
                     const std::vector<SlopeResult>& slopes) {
  out << "model,method,gamma,slope,intercept,points,skipped\n";
  for (const auto& s : slopes) {
    std::string skipped;
    for (std::size_t i = 0; i < s.skipped_stepsizes.size(); ++i) {
      skipped += (i ? ";" : "") + format_double(s.skipped_stepsizes[i]);
    }
    out << to_string(spec.model) << ',' << s.method << ',' << format_double(s.gamma) << ','
        << (s.fit ? format_double(s.fit->slope) : "NA") << ','
        << (s.fit ? format_double(s.fit->intercept) : "NA") << ',' << s.points << ','
        << (skipped.empty() ? "-" : skipped) << '\n';
  }
}

void emit_sweep_csv(std::ostream& out, const ExperimentSpec& spec,
                    const std::vector<SweepPoint>& points) {
  out << "model,method,dt,gamma,samples,error,error_stderr,diverged\n";
  for (const auto& p : points) {
    out << to_string(spec.model) << ',' << p.method << ',' << format_double(p.dt) << ','
        << format_double(p.gamma) << ',' << p.samples << ',' << opt(p.error) << ','
        << opt(p.error_stderr) << ',' << (p.diverged ? "true" : "false") << '\n';
  }
}

namespace {

SplittingMethod theory_method(const std::string& method) {
  if (method == "baoab" || method == "split:BAOAB") return SplittingMethod::BAOAB;
  if (method == "aboba" || method == "split:ABOBA") return SplittingMethod::ABOBA;
  throw ConfigError("theory-check supports baoab and aboba only, not '" + method + "'");
}

/// Gibbs-weighted integral of g over [a, b] with 20-point Gauss panels.
template <typename F>
double weighted_integral(F&& g, double beta, double a, double b) {
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * 64.0)));
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + width * k;
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double x) { return g(x) * std::exp(-beta * oscillator_eval(x).u); }, lo, lo + width);
  }
  return total;
}

}  // namespace

std::vector<TheoryRow> theory_check(const ExperimentSpec& spec, unsigned workers) {
  spec.validate();
  if (spec.model != ModelKind::Oscillator1D) throw ConfigError("theory-check is 1D only");
  for (const auto& m : spec.methods) theory_method(m);

  const double beta = 1.0 / spec.kBT;
  const auto ref = study_reference(spec, spec.gammas.front(), {}, workers);
  const double L = spec.quadrature_L;

  ExperimentSpec run_spec = spec;
  run_spec.checkpoints.clear();
  std::vector<TrajectorySpec> cells;
  const auto dts = sorted_unique(spec.stepsizes);
  const auto gammas = sorted_unique(spec.gammas);
  for (const auto& method : spec.methods) {
    for (double dt : dts) {
      for (double gamma : gammas) {
        for (std::size_t r = 0; r < spec.replicas; ++r) {
          cells.push_back(cell_spec(run_spec, method, dt, gamma, r));
        }
      }
    }
  }
  const auto results = run_trajectories(cells, workers);

  std::vector<TheoryRow> rows;
  std::size_t base = 0;
  for (const auto& method : spec.methods) {
    const SplittingMethod sm = theory_method(method);
    // Correction coefficient c(x) of the configurational log-density; its
    // Gibbs mean is removed because bin frequencies are normalised.
    const auto coeff = [&](double x) {
      const QuadraticInP q = f20_coefficients(sm, oscillator_eval(x).u2);
      return -q.a - q.c;
    };
    const double z = weighted_integral([](double) { return 1.0; }, beta, -L, L);
    const double mean_c = weighted_integral(coeff, beta, -L, L) / z;
    for (double dt : dts) {
      for (double gamma : gammas) {
        Histogram merged;
        bool diverged = false;
        for (std::size_t r = 0; r < spec.replicas; ++r) {
          diverged = diverged || results[base + r].diverged;
          merged.merge(results[base + r].histogram);
        }
        base += spec.replicas;
        const auto freqs = merged.frequencies();
        for (std::size_t i = 0; i < freqs.size(); ++i) {
          const double a = ref.edges[i], b = ref.edges[i + 1];
          const double bin_c = weighted_integral(coeff, beta, a, b) /
                               weighted_integral([](double) { return 1.0; }, beta, a, b);
          TheoryRow row{method, dt, gamma, 0.5 * (a + b), ref.probabilities[i],
                        dt * dt * (bin_c - mean_c), std::nullopt};
          if (!diverged && merged.counts()[i] > 0 && ref.probabilities[i] > 0.0) {
            row.empirical = std::log(freqs[i] / ref.probabilities[i]);
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

void emit_theory_csv(std::ostream& out, const std::vector<TheoryRow>& rows) {
  out << "method,dt,gamma,x,exact,predicted,empirical\n";
  for (const auto& r : rows) {
    out << r.method << ',' << format_double(r.dt) << ',' << format_double(r.gamma) << ','
        << format_double(r.x) << ',' << format_double(r.exact) << ',' << format_double(r.predicted)
        << ',' << opt(r.empirical) << '\n';
  }
}

}  // namespace langevin
