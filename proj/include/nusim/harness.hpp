#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nusim/common.hpp"

namespace nusim {

struct ResultRow {
  std::string experiment;
  std::string config_hash;
  Index n = 0;
  Index codebook = 0;
  Index trial = 0;
  std::string metric;
  Real value = 0;
  std::string flags;
};

// Every metric name emitted by any experiment; rows with names outside this
// registry are rejected.
const std::set<std::string>& metric_registry();

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<Index> trials;
};

struct RunOutput {
  std::vector<ResultRow> rows;
  std::string csv_body;      // canonical, deterministic
  std::string manifest_json;
  std::string summary;       // median/IQR per (n, metric)
  std::string out_path;
};

// Executes one experiment document (kinds: resolve | wz | sw | dlc | bounds).
RunOutput run(const nlohmann::json& config, const RunOverrides& overrides = {});

// Expands a "sweep" list (over epsilon) into run() invocations with derived
// sub-seeds and concatenates the outputs.
RunOutput sweep(const nlohmann::json& config, const RunOverrides& overrides = {});

// Parses the file at `path` and dispatches to run or sweep.
RunOutput run_file(const std::string& path, const RunOverrides& overrides = {});

// Writes csv (header + body) and the manifest sidecar next to it.
void write_outputs(const RunOutput& out);

std::string csv_header();
std::string format_csv_value(Real v);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace nusim
