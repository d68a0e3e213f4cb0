#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace langevin {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or unwritable files; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-open bins [e_i, e_{i+1}). Samples outside [e_0, e_M) count toward
/// total_samples only, so in-range frequencies sum to at most one.
class Histogram {
 public:
  Histogram() = default;
  explicit Histogram(std::vector<double> edges);
  static Histogram uniform(std::size_t bins, double lo, double hi);

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_samples() const { return total_; }
  std::size_t bin_count() const { return counts_.size(); }

  void add(double value);
  void add(std::span<const double> values);

  /// counts / total_samples. Throws StatsError when empty.
  std::vector<double> frequencies() const;
  std::vector<double> centres() const;

  /// Adds another histogram with identical edges.
  void merge(const Histogram& other);
  bool same_edges(const Histogram& other) const;

  /// Restores a histogram from stored counts (used by the file reader).
  static Histogram from_counts(std::vector<double> edges, std::vector<std::uint64_t> counts,
                               std::uint64_t total);

  friend bool operator==(const Histogram& a, const Histogram& b) {
    return a.edges_ == b.edges_ && a.counts_ == b.counts_ && a.total_ == b.total_;
  }

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  bool uniform_ = false;
  double lo_ = 0.0;
  double inv_width_ = 0.0;
};

Histogram bin_samples(Histogram h, std::span<const double> values);

/// (1/M) sum |omega_i - omega_hat_i| with omega = counts / total_samples.
double l1_bin_error(const Histogram& observed, std::span<const double> exact);
double l1_bin_error(std::span<const double> observed_freqs, std::span<const double> exact);

/// Bins every pairwise distance of a planar configuration (x0, y0, x1, ...).
void rdf_accumulate(Histogram& h, std::span<const double> x);

/// (1/(N M)) sum_n sum_m (omega_{n,m} - mean_n omega_{.,m})^2; needs N >= 2.
double ensemble_variance(const std::vector<std::vector<double>>& freqs);

/// Mean-removed lag-k autocovariance (normalised by the number of pairs).
double lag_autocovariance(std::span<const double> series, std::size_t k);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares through (log step, log error). Not robust to
/// outliers.
LineFit fit_loglog_slope(std::span<const double> stepsizes, std::span<const double> errors);

/// Pearson correlation.
double correlation(std::span<const double> a, std::span<const double> b);

/// Text format: `# edges: e0 ... eM`, `# total: n`, then `bin count` rows.
/// extra_header lines are written verbatim after a `# ` prefix.
void write_histogram(std::ostream& out, const Histogram& h,
                     const std::vector<std::string>& extra_header = {});
Histogram read_histogram(std::istream& in, std::vector<std::string>* extra_header = nullptr);

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace langevin
