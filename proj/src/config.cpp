#include "langevin/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace langevin {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a finite number");
  }
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  if (text.empty() || text[0] == '-') throw ConfigError("key '" + key + "': expected a nonnegative integer");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a nonnegative integer");
  }
  return v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
  return out;
}

BinSpec default_bins(ModelKind model) {
  switch (model) {
    case ModelKind::Oscillator1D:
      return {20, -3.5, 3.5};
    case ModelKind::MorseCluster:
      return {20, 0.5, 2.5};
    case ModelKind::LJCluster:
      return {20, 0.5, 3.5};
  }
  return {};
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += values[i];
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

ExperimentSpec parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' given twice");
    }
  }

  ExperimentSpec spec;
  if (auto it = kv.find("model"); it != kv.end()) {
    try {
      spec.model = parse_model_kind(it->second);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  spec.bins = default_bins(spec.model);

  for (const auto& [key, value] : kv) {
    if (key == "model") {
      continue;
    } else if (key == "methods") {
      spec.methods = split_list(value);
    } else if (key == "stepsizes") {
      spec.stepsizes = to_doubles(key, value);
    } else if (key == "gamma") {
      spec.gammas = to_doubles(key, value);
    } else if (key == "kBT") {
      spec.kBT = to_double(key, value);
    } else if (key == "t_total") {
      spec.t_total = to_double(key, value);
    } else if (key == "burn_in_fraction") {
      spec.burn_in_fraction = to_double(key, value);
    } else if (key == "replicas") {
      spec.replicas = to_uint(key, value);
    } else if (key == "seed") {
      spec.seed = to_uint(key, value);
    } else if (key == "stride") {
      spec.stride = to_uint(key, value);
    } else if (key == "bins.count") {
      spec.bins.count = to_uint(key, value);
    } else if (key == "bins.lo") {
      spec.bins.lo = to_double(key, value);
    } else if (key == "bins.hi") {
      spec.bins.hi = to_double(key, value);
    } else if (key == "reference.h") {
      spec.reference_h = to_double(key, value);
    } else if (key == "reference.method") {
      spec.reference_method = value;
    } else if (key == "reference.t_total") {
      spec.reference_t_total = to_double(key, value);
    } else if (key == "reference.replicas") {
      spec.reference_replicas = to_uint(key, value);
    } else if (key == "quadrature.L") {
      spec.quadrature_L = to_double(key, value);
    } else if (key == "checkpoints") {
      spec.checkpoints.clear();
      for (const auto& item : split_list(value)) spec.checkpoints.push_back(to_uint(key, item));
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string to_config_text(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "model = " << to_string(spec.model) << '\n'
      << "methods = " << join(spec.methods) << '\n'
      << "stepsizes = " << join(spec.stepsizes) << '\n'
      << "gamma = " << join(spec.gammas) << '\n'
      << "kBT = " << format_double(spec.kBT) << '\n'
      << "t_total = " << format_double(spec.t_total) << '\n'
      << "burn_in_fraction = " << format_double(spec.burn_in_fraction) << '\n'
      << "replicas = " << spec.replicas << '\n'
      << "seed = " << spec.seed << '\n'
      << "stride = " << spec.stride << '\n'
      << "bins.count = " << spec.bins.count << '\n'
      << "bins.lo = " << format_double(spec.bins.lo) << '\n'
      << "bins.hi = " << format_double(spec.bins.hi) << '\n'
      << "quadrature.L = " << format_double(spec.quadrature_L) << '\n';
  if (spec.reference_h > 0.0) out << "reference.h = " << format_double(spec.reference_h) << '\n';
  if (!spec.reference_method.empty()) out << "reference.method = " << spec.reference_method << '\n';
  if (spec.reference_t_total > 0.0) {
    out << "reference.t_total = " << format_double(spec.reference_t_total) << '\n';
  }
  if (spec.reference_replicas > 0) out << "reference.replicas = " << spec.reference_replicas << '\n';
  if (!spec.checkpoints.empty()) out << "checkpoints = " << join(spec.checkpoints) << '\n';
  return out.str();
}

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b) {
  return a.model == b.model && a.methods == b.methods && a.stepsizes == b.stepsizes &&
         a.gammas == b.gammas && a.kBT == b.kBT && a.t_total == b.t_total &&
         a.burn_in_fraction == b.burn_in_fraction && a.replicas == b.replicas && a.seed == b.seed &&
         a.bins.count == b.bins.count && a.bins.lo == b.bins.lo && a.bins.hi == b.bins.hi &&
         a.stride == b.stride && a.reference_h == b.reference_h &&
         a.reference_method == b.reference_method && a.reference_t_total == b.reference_t_total &&
         a.reference_replicas == b.reference_replicas && a.quadrature_L == b.quadrature_L &&
         a.checkpoints == b.checkpoints;
}

}  // namespace langevin
