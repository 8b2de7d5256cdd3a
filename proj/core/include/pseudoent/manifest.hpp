#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "pseudoent/keys.hpp"
#include "pseudoent/statevector.hpp"

namespace pseudoent {

/// Key material serialization: {seed, role}.
void to_json(nlohmann::json& j, const SeededKey& key);
void from_json(const nlohmann::json& j, SeededKey& key);

/// Full subset-phase key material and sizes.
void to_json(nlohmann::json& j, const SubsetPhaseSpec& spec);
void from_json(const nlohmann::json& j, SubsetPhaseSpec& spec);

inline constexpr const char* kToolVersion = "0.1.0";

/// One experiment invocation: re-running a manifest reproduces all
/// numeric outputs bit-for-bit within a single build. The timestamp is
/// informational and never flows into result files.
struct ExperimentManifest {
  std::string experiment;
  nlohmann::json parameters;
  std::uint64_t master_seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;

  nlohmann::json to_json() const;
  static ExperimentManifest from_json(const nlohmann::json& j);

  bool operator==(const ExperimentManifest& other) const {
    return experiment == other.experiment && parameters == other.parameters &&
           master_seed == other.master_seed &&
           tool_version == other.tool_version &&
           timestamp == other.timestamp;
  }
};

std::string iso8601_now();

/// Write via a temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& contents);

/// Scan a run directory for *.manifest.json files and their result
/// files; corrupt or orphaned entries are flagged and the rest of the
/// report is still produced.
std::string summarize_run_directory(const std::string& dir);

}  // namespace pseudoent
