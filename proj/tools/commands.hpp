#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace allax::cli {

/// Flags shared by every subcommand.
struct GlobalOptions {
  bool json = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::map<std::string, double> thresholds{
      {"analytic", 1e-10}, {"fd", 1e-5}, {"drift", 1e-6}, {"commute", 1e-8}};
};

/// Where coefficient data comes from: a JSON file or seeded random draws.
struct InputOptions {
  std::string coeffs;
  std::vector<std::uint64_t> random;  // p, seed, count
};

struct VerifyOptions {
  InputOptions input;
  bool all = false;
  std::vector<std::string> variants;
  std::vector<unsigned> n{1, 2, 3};
  std::vector<std::size_t> d{1, 2};
  std::string method = "both";
};

struct VerifyLaxOptions {
  std::string coeffs;
  std::string variant;
  unsigned n = 1;
  std::size_t d = 1;
  std::string method = "analytic";
};

struct VerifyBracketOptions {
  InputOptions input;
  unsigned max_order = 3;
};

struct FlowOptions {
  std::string coeffs;
  std::string hamiltonian = "AL";
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t monitor_every = 1;
  std::string method = "analytic";
  bool backward = false;
  bool order_check = false;
};

struct DiscriminantOptions {
  std::string coeffs;
  std::size_t grid = 256;
};

struct InvariantsOptions {
  std::string coeffs;
  unsigned max_order = 3;
};

struct DumpOptions {
  std::string coeffs;
  std::string what = "floquet";
  std::size_t d = 1;
  std::size_t size = 0;
  std::int64_t index = 0;
};

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o);
int cmd_verify_lax(const GlobalOptions& g, const VerifyLaxOptions& o);
int cmd_verify_bracket(const GlobalOptions& g, const VerifyBracketOptions& o);
int cmd_flow(const GlobalOptions& g, const FlowOptions& o);
int cmd_discriminant(const GlobalOptions& g, const DiscriminantOptions& o);
int cmd_invariants(const GlobalOptions& g, const InvariantsOptions& o);
int cmd_dump(const GlobalOptions& g, const DumpOptions& o);
int cmd_selftest(const GlobalOptions& g);

/// Bad flags, unreadable or unwritable files. Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace allax::cli
