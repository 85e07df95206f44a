#pragma once
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quartic/oracle.hpp"
#include "quartic/regions.hpp"
#include "quartic/surfaces.hpp"

namespace quartic::cli {

enum class Command { count, torsor_count, peyre, equidist, kloosterman, asymptote, verify };

std::string to_string(Command c);

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kCapExceeded = 3, kModuleError = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int64_t kParametrizedCap = 20000;
constexpr int64_t kTorsorCap = 10000000;
constexpr int64_t kKloostermanTableCap = 2000;
constexpr int64_t kVerifyCap = 500;

struct RunConfig {
  Command command = Command::count;
  Surface surface = Surface::V1;
  std::optional<int64_t> B;
  std::vector<int64_t> B_list;
  int64_t B_max = 100;
  CountMethod method = CountMethod::parametrized;
  double tolerance = 1e-3;
  uint64_t prime_limit = 1000000;
  int64_t q_min = 2, q_max = 100;
  RegionParams region;
  double budget_seconds = 1800;
  std::string format = "csv";
  std::string output;  // empty: stdout
  std::filesystem::path cache_dir;
  bool use_cache = true;
  int workers = 0;  // 0: OpenMP default
};

/// "1e4,1e5,1000" -> {10000, 100000, 1000}; entries must be positive integers.
std::vector<int64_t> parse_B_list(const std::string& s);

/// argv[0] is skipped. Throws ConfigError with usage text; returns nullopt after --help.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& help_out);

/// Append-only line records {"schema", "surface", "B", "method", "count", "seconds"}.
/// Lines with another schema version are ignored.
class CountCache {
 public:
  static constexpr int kSchema = 1;
  explicit CountCache(std::filesystem::path dir);
  std::optional<int64_t> lookup(Surface s, int64_t B, CountMethod m) const;
  void store(Surface s, int64_t B, CountMethod m, int64_t count, double seconds);
  std::filesystem::path file() const { return file_; }

 private:
  std::filesystem::path file_;
};

/// Runs the command; primary output goes to cfg.output or `out`, diagnostics to `err`.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_config + execute with exit-code mapping.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quartic::cli
