#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

namespace allax::cli {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Provenance block attached to every report the tool writes.
struct RunManifest {
  std::string command;
  std::string input;         // path, or a description of generated input
  std::string input_digest;  // sha256 of the input bytes
  std::uint64_t seed = 0;
  std::map<std::string, double> thresholds;
  std::string timestamp;     // UTC, ISO 8601

  nlohmann::json to_json() const;
};

std::string tool_version();
std::string utc_now();

}  // namespace allax::cli
