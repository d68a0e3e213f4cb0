#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "langevin/harness.hpp"

namespace langevin {

/// Flat `key = value` text with `#` comments. Lists are comma separated.
/// Unknown or repeated keys are errors. The result is validated.
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec parse_config_file(const std::string& path);
ExperimentSpec parse_config_string(const std::string& text);

/// Canonical config text for a spec; parse_config(to_config_text(s)) == s.
std::string to_config_text(const ExperimentSpec& spec);

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b);

}  // namespace langevin
