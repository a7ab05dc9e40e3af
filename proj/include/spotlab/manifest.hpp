#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace spotlab {

inline constexpr const char* kToolName = "spotlab";
inline constexpr const char* kToolVersion = "0.1.0";

// Run provenance: which config produced which files. The timestamp is the
// only non-deterministic field.
struct RunManifest {
  std::string tool = std::string(kToolName) + " " + kToolVersion;
  std::string command;
  std::uint64_t seed = 0;
  std::string timestamp;
  double wall_time_seconds = 0.0;
  std::map<std::string, std::string> config_echo;
  std::vector<std::string> outputs;

  static std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
  }
};

inline void write_manifest_json(std::ostream& os, const RunManifest& manifest) {
  nlohmann::json j;
  j["tool"] = manifest.tool;
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["timestamp"] = manifest.timestamp;
  j["wall_time_seconds"] = manifest.wall_time_seconds;
  j["config"] = manifest.config_echo;
  j["outputs"] = manifest.outputs;
  os << j.dump(2) << '\n';
}

}  // namespace spotlab
