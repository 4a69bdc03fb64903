#pragma once

// Scenario and sweep files: flat `key = value` text grouped in [sections],
// `#` starts a comment. See README for the keys.

#include <map>
#include <string>
#include <vector>

#include "sfdoa/pipeline.hpp"
#include "sfdoa/simulate.hpp"

namespace sfdoa::config {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Document {
  std::string path;
  std::map<std::string, std::vector<Entry>> sections;
};

/// Throws IoError when the file cannot be read and ConfigError on syntax errors.
Document read_document(const std::string& path);
Document parse_document(const std::string& text, const std::string& path = "<string>");

/// Comma list of numbers, each item either a value or an inclusive a:step:b range.
std::vector<double> parse_number_list(const std::string& text);

/// Builds the array and sources. A relative geometry `path` is resolved
/// against the scenario file's directory.
Scenario load_scenario(const std::string& path);
Scenario scenario_from(const Document& doc);

ExperimentConfig load_sweep(const std::string& path);
ExperimentConfig sweep_from(const Document& doc);

}  // namespace sfdoa::config
