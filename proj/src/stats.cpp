#include "langevin/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace langevin {

Histogram::Histogram(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw StatsError("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1])) throw StatsError("histogram edges must be strictly increasing");
  }
  counts_.assign(edges_.size() - 1, 0);
}

Histogram Histogram::uniform(std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw StatsError("uniform histogram needs bins > 0 and hi > lo");
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lo + width * static_cast<double>(i);
  edges[bins] = hi;
  Histogram h(std::move(edges));
  h.uniform_ = true;
  h.lo_ = lo;
  h.inv_width_ = 1.0 / width;
  return h;
}

Histogram Histogram::from_counts(std::vector<double> edges, std::vector<std::uint64_t> counts,
                                 std::uint64_t total) {
  Histogram h(std::move(edges));
  if (counts.size() != h.counts_.size()) throw StatsError("count vector does not match edges");
  const std::uint64_t in_range = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (in_range > total) throw StatsError("bin counts exceed total samples");
  h.counts_ = std::move(counts);
  h.total_ = total;
  return h;
}

void Histogram::add(double value) {
  ++total_;
  if (!(value >= edges_.front() && value < edges_.back())) return;
  std::size_t bin;
  if (uniform_) {
    // Arithmetic guess, then snapped to the stored edges.
    bin = std::min(static_cast<std::size_t>((value - lo_) * inv_width_), counts_.size() - 1);
    while (bin > 0 && value < edges_[bin]) --bin;
    while (bin + 1 < counts_.size() && value >= edges_[bin + 1]) ++bin;
  } else {
    bin = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), value) -
                                   edges_.begin()) - 1;
  }
  ++counts_[bin];
}

void Histogram::add(std::span<const double> values) {
  for (double v : values) add(v);
}

std::vector<double> Histogram::frequencies() const {
  if (total_ == 0) throw StatsError("histogram is empty");
  std::vector<double> f(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    f[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
  }
  return f;
}

std::vector<double> Histogram::centres() const {
  std::vector<double> c(counts_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (edges_[i] + edges_[i + 1]);
  return c;
}

bool Histogram::same_edges(const Histogram& other) const { return edges_ == other.edges_; }

void Histogram::merge(const Histogram& other) {
  if (edges_.empty()) {
    *this = other;
    return;
  }
  if (!same_edges(other)) throw StatsError("cannot merge histograms with different edges");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

Histogram bin_samples(Histogram h, std::span<const double> values) {
  h.add(values);
  return h;
}

double l1_bin_error(std::span<const double> observed, std::span<const double> exact) {
  if (observed.size() != exact.size() || observed.empty()) {
    throw StatsError("l1_bin_error: bin counts differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) sum += std::abs(observed[i] - exact[i]);
  return sum / static_cast<double>(observed.size());
}

double l1_bin_error(const Histogram& observed, std::span<const double> exact) {
  const auto freqs = observed.frequencies();
  return l1_bin_error(freqs, exact);
}

void rdf_accumulate(Histogram& h, std::span<const double> x) {
  const std::size_t atoms = x.size() / 2;
  for (std::size_t i = 0; i < atoms; ++i) {
    for (std::size_t j = i + 1; j < atoms; ++j) {
      const double dx = x[2 * i] - x[2 * j];
      const double dy = x[2 * i + 1] - x[2 * j + 1];
      h.add(std::sqrt(dx * dx + dy * dy));
    }
  }
}

double ensemble_variance(const std::vector<std::vector<double>>& freqs) {
  const std::size_t runs = freqs.size();
  if (runs < 2) throw StatsError("ensemble_variance needs at least two runs");
  const std::size_t bins = freqs.front().size();
  for (const auto& row : freqs) {
    if (row.size() != bins) throw StatsError("ensemble_variance: ragged frequency matrix");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < bins; ++m) {
    double mean = 0.0;
    for (const auto& row : freqs) mean += row[m];
    mean /= static_cast<double>(runs);
    for (const auto& row : freqs) sum += (row[m] - mean) * (row[m] - mean);
  }
  return sum / static_cast<double>(runs * bins);
}

double lag_autocovariance(std::span<const double> series, std::size_t k) {
  const std::size_t n = series.size();
  if (n <= k + 1) throw StatsError("lag_autocovariance: series too short for lag");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = k; i < n; ++i) sum += (series[i] - mean) * (series[i - k] - mean);
  return sum / static_cast<double>(n - k);
}

LineFit fit_loglog_slope(std::span<const double> stepsizes, std::span<const double> errors) {
  if (stepsizes.size() != errors.size()) throw StatsError("fit_loglog_slope: size mismatch");
  if (stepsizes.size() < 3) throw StatsError("fit_loglog_slope: need at least three points");
  const std::size_t n = stepsizes.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(stepsizes[i] > 0.0) || !(errors[i] > 0.0)) {
      throw StatsError("fit_loglog_slope: stepsizes and errors must be positive");
    }
    lx[i] = std::log(stepsizes[i]);
    ly[i] = std::log(errors[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw StatsError("fit_loglog_slope: stepsizes must not all be equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw StatsError("correlation: need two equal series");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_histogram(std::ostream& out, const Histogram& h,
                     const std::vector<std::string>& extra_header) {
  out << "# edges:";
  for (double e : h.edges()) out << ' ' << format_double(e);
  out << "\n# total: " << h.total_samples() << '\n';
  for (const auto& line : extra_header) out << "# " << line << '\n';
  for (std::size_t i = 0; i < h.bin_count(); ++i) out << i << ' ' << h.counts()[i] << '\n';
}

Histogram read_histogram(std::istream& in, std::vector<std::string>* extra_header) {
  std::vector<double> edges;
  std::uint64_t total = 0;
  bool have_edges = false, have_total = false;
  std::vector<std::uint64_t> counts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# edges:")) {
      std::istringstream ss(line.substr(8));
      double e;
      while (ss >> e) edges.push_back(e);
      have_edges = true;
    } else if (line.starts_with("# total:")) {
      total = std::stoull(line.substr(8));
      have_total = true;
    } else if (line.starts_with("#")) {
      if (extra_header != nullptr) extra_header->push_back(line.size() > 2 ? line.substr(2) : "");
    } else {
      std::istringstream ss(line);
      std::size_t index;
      std::uint64_t count;
      if (!(ss >> index >> count) || index != counts.size()) {
        throw StatsError("malformed histogram row: '" + line + "'");
      }
      counts.push_back(count);
    }
  }
  if (!have_edges || !have_total) throw StatsError("histogram file lacks edges or total header");
  return Histogram::from_counts(std::move(edges), std::move(counts), total);
}

}  // namespace langevin
