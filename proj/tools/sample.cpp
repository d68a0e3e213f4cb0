// sample: command-line front end for the Langevin sampling studies.
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "langevin/config.hpp"
#include "langevin/harness.hpp"

namespace fs = std::filesystem;
using namespace langevin;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAllDiverged = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string config;
  std::string out = ".";
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

int report_divergence(const std::vector<RunResult>& runs) {
  std::size_t diverged = 0;
  for (const auto& r : runs) {
    if (r.diverged) {
      ++diverged;
      std::cerr << "warning: " << r.method << " dt=" << format_double(r.dt)
                << " gamma=" << format_double(r.gamma) << " diverged\n";
    }
  }
  return !runs.empty() && diverged == runs.size() ? kExitAllDiverged : 0;
}

int cmd_run(const ExperimentSpec& spec, const fs::path& out, unsigned workers, bool slopes) {
  if (slopes && spec.stepsizes.size() < 3) {
    throw ConfigError("convergence needs at least three stepsizes");
  }
  const StudyResult study = convergence_study(spec, out / "refs", workers);
  const fs::path results = out / "results.csv";
  auto csv = open_output(results);
  emit_csv(csv, spec, study.runs);
  close_output(csv, results);
  if (slopes) {
    const fs::path path = out / "slopes.csv";
    auto f = open_output(path);
    emit_slopes_csv(f, spec, study.slopes);
    close_output(f, path);
    for (const auto& s : study.slopes) {
      std::cout << s.method << " gamma=" << format_double(s.gamma) << " slope="
                << (s.fit ? format_double(s.fit->slope) : "NA") << '\n';
    }
  }
  std::cout << "wrote " << results.string() << '\n';
  return report_divergence(study.runs);
}

int cmd_sweep(const ExperimentSpec& spec, const fs::path& out, unsigned workers) {
  const auto points = gamma_sweep(spec, out / "refs", workers);
  const fs::path path = out / "sweep.csv";
  auto f = open_output(path);
  emit_sweep_csv(f, spec, points);
  close_output(f, path);
  std::cout << "wrote " << path.string() << '\n';
  const bool all = !points.empty() && std::all_of(points.begin(), points.end(),
                                                  [](const SweepPoint& p) { return p.diverged; });
  return all ? kExitAllDiverged : 0;
}

int cmd_reference(const ExperimentSpec& spec, const fs::path& out, unsigned workers) {
  const auto gammas = spec.gammas;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const auto ref = study_reference(spec, gammas[i], out / "refs", workers);
    const fs::path path = gammas.size() == 1 || spec.model == ModelKind::Oscillator1D
                              ? out / "reference.txt"
                              : out / ("reference-gamma" + format_double(gammas[i]) + ".txt");
    auto f = open_output(path);
    write_reference(f, ref);
    close_output(f, path);
    std::cout << "wrote " << path.string() << '\n';
    if (spec.model == ModelKind::Oscillator1D) break;
  }
  return 0;
}

int cmd_theory(const ExperimentSpec& spec, const fs::path& out, unsigned workers) {
  const auto rows = theory_check(spec, workers);
  const fs::path path = out / "theory.csv";
  auto f = open_output(path);
  emit_theory_csv(f, rows);
  close_output(f, path);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin and Brownian sampling studies"};
  app.require_subcommand(1);
  Options opt;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "study config file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--workers", opt.workers, "worker threads (default: SAMPLE_WORKERS or all cores)");
    sub->add_option("--seed", opt.seed, "override the config seed");
  };
  auto* run = app.add_subcommand("run", "run every cell and write results.csv");
  auto* conv = app.add_subcommand("convergence", "run cells, fit slopes, write results.csv and slopes.csv");
  auto* sweep = app.add_subcommand("gamma-sweep", "error at sample checkpoints per gamma, write sweep.csv");
  auto* ref = app.add_subcommand("reference", "write the reference distribution");
  auto* theory = app.add_subcommand("theory-check", "compare bin deviations with the predicted correction");
  for (auto* sub : {run, conv, sweep, ref, theory}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    ExperimentSpec spec = parse_config_file(opt.config);
    if (opt.seed) spec.seed = *opt.seed;
    const unsigned workers = opt.workers > 0 ? opt.workers : default_workers();
    const fs::path out = opt.out;
    prepare_out_dir(out);
    if (*run) return cmd_run(spec, out, workers, false);
    if (*conv) return cmd_run(spec, out, workers, true);
    if (*sweep) return cmd_sweep(spec, out, workers);
    if (*ref) return cmd_reference(spec, out, workers);
    return cmd_theory(spec, out, workers);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
