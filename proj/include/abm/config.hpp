#pragma once

#include <map>
#include <string>
#include <vector>

#include "abm/market_sim.hpp"
#include "abm/prob_sim.hpp"

namespace abm {

// Flat "section.key" -> value view of an INI-style config file.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap read_config_file(const std::string& path);
// Parses "section.key=value".
std::pair<std::string, std::string> parse_override(const std::string& text);

struct ProbSimSettings {
  prob::Params params;
  std::size_t runs{1000};
  std::size_t bins{40};
  std::uint64_t seed{20231210};
};

// Applies every market/fundamental/agents/dealer key in `values` onto
// `config`. Unknown keys in those sections raise ValidationError.
void apply_sim_config(SimConfig& config, const ConfigMap& values);
void apply_probsim_config(ProbSimSettings& settings, const ConfigMap& values);

// Effective configuration as ordered key/value pairs (for meta.json).
std::vector<std::pair<std::string, std::string>> describe(const SimConfig& config);
std::vector<std::pair<std::string, std::string>> describe(const ProbSimSettings& settings);

std::string format_number(double value);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

}  // namespace abm
