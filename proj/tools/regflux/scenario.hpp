#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace regflux::cli {

enum class Command { Solve, Sweep, Extract, Triangular, Check };

struct RunOptions {
  std::filesystem::path out = "regflux_out";
  std::size_t jobs = 0;
  bool verbose = false;
};

struct RunOutcome {
  int exit_code = 0;                  // 0 all checks pass, 2 some check failed
  std::vector<std::string> failures;  // names of failed checks
};

/// Parses a JSON config file; malformed documents raise ParseError.
nlohmann::json load_config(const std::filesystem::path& path);

/// Runs one pipeline. Unknown keys raise ParseError naming the key; invalid
/// values raise ConfigError or InputError. Writes artifacts and manifest.json
/// under opts.out.
RunOutcome run_command(Command cmd, const nlohmann::json& config, const RunOptions& opts);

/// The shipped scenarios, each in its own subdirectory of opts.out.
RunOutcome run_demo(const RunOptions& opts);

/// Built-in config of a demo scenario by name.
nlohmann::json demo_config(const std::string& name);
std::vector<std::string> demo_names();

std::uint64_t fnv1a64(std::string_view bytes);

/// manifest.json listing every file below dir (sorted, manifest excluded)
/// with its size and FNV-1a 64 hash.
nlohmann::json write_manifest(const std::filesystem::path& dir);

}  // namespace regflux::cli
