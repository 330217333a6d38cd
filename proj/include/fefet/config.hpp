#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fefet/array.hpp"
#include "fefet/classifier.hpp"
#include "fefet/fault.hpp"
#include "fefet/memory.hpp"

namespace fefet {

// ---- TOML subset -----------------------------------------------------------
// Supported: comments, [section] headers, bare keys, and values that are
// integers, floats, booleans, basic strings or single-line arrays of those.

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
  std::variant<std::int64_t, double, bool, std::string, TomlArray> v;
  int line = 0;
};

// section name ("" for top level) -> key -> value
using TomlDocument = std::map<std::string, std::map<std::string, TomlValue>>;

/// Throws ConfigError with "<source>:<line>: ..." on malformed input.
TomlDocument parse_toml(std::string_view text, const std::string& source = "<config>");

// ---- Experiment configuration ---------------------------------------------

struct ArraySection {
  std::uint64_t capacity_bytes = 4ULL * 1024 * 1024;
  int word_width = 64;
  OptTarget opt = OptTarget::kReadEdp;
  std::optional<Organization> organization;
  PeripheralConstants periph;
};

struct WorkloadSection {
  // graph
  std::uint32_t n_queries = 64;
  std::uint32_t graph_nodes = 128;  // synthetic graph when no edge list is given
  double edge_prob = 0.05;
  bool directed = false;
  // classifier
  BlobSpec blobs;
  double ridge_lambda = 1.0;
  std::uint64_t dataset_seed = 42;
};

struct SweepSection {
  ShmooGrid shmoo;
  std::vector<int> minsize_domains{20, 30, 50, 75, 100, 150, 200, 300, 400, 500};
  double epsilon = 0.01;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  std::uint64_t samples_per_level = 10000;
  std::uint64_t population_cells = 1500;
  int replicates = 3;
  MemoryConfig memory;
  ArraySection array;
  WorkloadSection workload;
  SweepSection sweep;
};

/// Applies a document on top of the defaults. Unknown sections and keys are
/// rejected. The ADC current range always follows [device].
ExperimentConfig config_from_toml(const TomlDocument& doc, const std::string& source = "<config>");
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace fefet
