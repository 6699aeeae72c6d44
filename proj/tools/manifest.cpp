#include "manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <stdexcept>

#ifndef ALLAX_VERSION
#define ALLAX_VERSION "0.0.0"
#endif

namespace allax::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string tool_version() { return ALLAX_VERSION; }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["input"] = input;
  j["input_sha256"] = input_digest;
  j["seed"] = seed;
  j["version"] = tool_version();
  j["thresholds"] = thresholds;
  j["timestamp_utc"] = timestamp;
  return j;
}

}  // namespace allax::cli
