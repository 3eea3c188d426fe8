#pragma once
// Batch front end: strict run manifests and per-command dispatch.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fga/io.hpp"

namespace fga {

enum class Command { spectrum, fga, drum, verify };
std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// Exit codes of a run.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunManifest {
  Command command = Command::spectrum;
  /// Resolved instance path (empty when the potential is given inline).
  std::filesystem::path instance;
  std::uint64_t seed = 1;
  std::filesystem::path output = "out";
  /// Flat parameter table with every default filled in.
  json parameters = json::object();
  /// Asymptotic constants (all of ThetaConstants::names()).
  json constants = json::object();
};

/// Names accepted in `parameters` for a command.
std::vector<std::string> parameter_names(Command c);

/// Manifest with defaults only.
RunManifest default_manifest(Command c);

/// Strict parse: unknown keys, wrong types, and invalid values raise ConfigError
/// naming the field. The config's `command`, when present, must match `expected`.
RunManifest parse_config(const std::filesystem::path& path, std::optional<Command> expected = std::nullopt);

/// Applies `key=value` (value parsed as JSON when possible, else as a string).
/// Keys: a parameter name, a constant name, `seed`, `instance`, `output`.
void apply_override(RunManifest& m, const std::string& assignment);

/// Re-checks every invariant (power-of-two N, file existence, ranges).
void validate_manifest(const RunManifest& m);

json to_json(const RunManifest& m);

struct RunOutcome {
  ResultRecord record;
  int exit_code = kExitPass;
};

/// Executes the manifest, writing result.json and artifacts only inside
/// m.output. Component errors are captured in record.error with the stage.
RunOutcome run(const RunManifest& m);

}  // namespace fga
