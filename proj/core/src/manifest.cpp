#include "pseudoent/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pseudoent {

void to_json(nlohmann::json& j, const SeededKey& key) {
  j = nlohmann::json{{"seed", key.seed}, {"role", key_role_name(key.role)}};
}

void from_json(const nlohmann::json& j, SeededKey& key) {
  key.seed = j.at("seed").get<std::uint64_t>();
  key.role = key_role_from_name(j.at("role").get<std::string>());
}

void to_json(nlohmann::json& j, const SubsetPhaseSpec& spec) {
  j = nlohmann::json{{"n", spec.n},
                     {"k", spec.k},
                     {"perm_key", spec.perm_key},
                     {"phase_key", spec.phase_key},
                     {"phase_mode", phase_mode_name(spec.phase_mode)},
                     {"qubit_cap", spec.qubit_cap}};
}

void from_json(const nlohmann::json& j, SubsetPhaseSpec& spec) {
  spec.n = j.at("n").get<int>();
  spec.k = j.at("k").get<int>();
  spec.perm_key = j.at("perm_key").get<SeededKey>();
  spec.phase_key = j.at("phase_key").get<SeededKey>();
  spec.phase_mode = phase_mode_from_name(j.at("phase_mode").get<std::string>());
  spec.qubit_cap = j.value("qubit_cap", kDefaultQubitCap);
}

nlohmann::json ExperimentManifest::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["parameters"] = parameters;
  j["master_seed"] = master_seed;
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp;
  return j;
}

ExperimentManifest ExperimentManifest::from_json(const nlohmann::json& j) {
  ExperimentManifest m;
  m.experiment = j.at("experiment").get<std::string>();
  m.parameters = j.at("parameters");
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  return m;
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    }
    out.write(contents.data(),
              static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw std::runtime_error("atomic_write: write failed for " +
                               tmp.string());
    }
  }
  fs::rename(tmp, target);
}

std::string summarize_run_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ostringstream out;
  out << "run summary: " << dir << "\n";
  if (!fs::exists(dir)) {
    out << "  (directory does not exist)\n";
    return out.str();
  }

  std::vector<fs::path> manifests;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 14 &&
        name.substr(name.size() - 14) == ".manifest.json") {
      manifests.push_back(entry.path());
    }
  }
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) {
    out << "  (no manifests found)\n";
    return out.str();
  }

  out << "  experiment                     | verdict | key metric\n";
  out << "  -------------------------------+---------+-----------\n";
  for (const auto& path : manifests) {
    std::string experiment = path.filename().string();
    experiment = experiment.substr(0, experiment.size() - 14);
    std::string verdict = "-";
    std::string metric = "-";
    try {
      std::ifstream in(path);
      const auto manifest =
          ExperimentManifest::from_json(nlohmann::json::parse(in));
      experiment = manifest.experiment;
    } catch (const std::exception&) {
      verdict = "corrupt manifest";
    }
    const fs::path result =
        path.parent_path() /
        (path.filename().string().substr(
             0, path.filename().string().size() - 14) +
         ".json");
    if (fs::exists(result)) {
      try {
        std::ifstream in(result);
        const auto j = nlohmann::json::parse(in);
        if (j.contains("verdict")) {
          verdict = j["verdict"].get<bool>() ? "pass" : "FAIL";
        }
        if (j.contains("summary") && j["summary"].contains("mean")) {
          metric = "mean=" + j["summary"]["mean"].dump();
        } else if (j.contains("max_von_neumann_bits")) {
          metric = "max_S=" + j["max_von_neumann_bits"].dump();
        } else if (j.contains("bound_ratio")) {
          metric = "bound_ratio=" + j["bound_ratio"].dump();
        }
      } catch (const std::exception&) {
        verdict = "corrupt result";
      }
    } else if (verdict == "-") {
      verdict = "missing result";
    }
    out << "  " << experiment;
    for (std::size_t pad = experiment.size(); pad < 31; ++pad) {
      out << ' ';
    }
    out << "| " << verdict;
    for (std::size_t pad = verdict.size(); pad < 8; ++pad) {
      out << ' ';
    }
    out << "| " << metric << "\n";
  }
  return out.str();
}

}  // namespace pseudoent
