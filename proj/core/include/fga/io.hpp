#pragma once
// Serialization: potentials and polytopes as JSON, wavefunctions as JSON or
// little-endian complex64 with a JSON sidecar, traces and plot data as CSV.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fga/adiabatic.hpp"
#include "fga/polytope.hpp"
#include "fga/potential.hpp"
#include "fga/verify.hpp"

namespace fga {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
/// Wavefunctions up to this many amplitudes are stored inline as JSON.
inline constexpr std::size_t kInlineAmplitudeLimit = 4096;

json to_json(const GridSpec& grid);
GridSpec grid_from_json(const json& j);

json to_json(const PotentialSpec& p);
/// Throws ConfigError on unknown types, missing fields, or unknown keys.
PotentialPtr potential_from_json(const json& j);

json to_json(const std::vector<Halfplane>& planes);
/// Accepts a list of {a, b} objects.
std::vector<Halfplane> planes_from_json(const json& j);

/// Drum instance file: a bare half-plane list, or an object with `planes` and
/// optional `name`, `R`, `eps0`, `reference`, `lower_bound`, `description`.
struct DrumFile {
  std::string name;
  std::vector<Halfplane> planes;
  double R = 0.0;
  double eps0 = 0.1;
  std::optional<double> reference;
  std::optional<double> lower_bound;
};
DrumFile drum_file_from_json(const json& j);

json to_json(const ProbeRecord& r);
json to_json(const SuiteReport& r);

/// Result of one CLI run. Every numeric leaf must be finite.
struct ResultRecord {
  std::string schema_version = kSchemaVersion;
  std::string command;
  json inputs = json::object();
  std::optional<double> lambda0_estimate;
  json references = json::object();
  json deltas = json::object();
  /// name -> bool; the run passes when all are true.
  json checks = json::object();
  json diagnostics = json::object();
  /// Wall-clock seconds; excluded from determinism comparisons.
  json timings = json::object();
  /// Artifact file names relative to the output directory.
  std::vector<std::string> artifacts;
  json error = nullptr;
  bool pass() const;
  bool operator==(const ResultRecord&) const = default;
};

json to_json(const ResultRecord& r);
/// Strict inverse of to_json; throws ConfigError on schema problems.
ResultRecord result_from_json(const json& j);
/// Throws NonFiniteValue naming the first non-finite numeric leaf.
void require_finite(const json& j, const std::string& where = "");

/// Parses with line/column diagnostics in the thrown ConfigError.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// time, norm, energy, overlap columns.
void write_trace_csv(const std::filesystem::path& path, const EvolutionTrace& trace);
void write_xy_csv(const std::filesystem::path& path, const std::string& x_name, const std::string& y_name,
                  const std::vector<double>& xs, const std::vector<double>& ys);
/// probe, instance, expectation, pass, then measured/bound pairs flattened.
void write_summary_csv(const std::filesystem::path& path, const SuiteReport& report);

/// Writes `<stem>.json`, plus `<stem>.bin` when the state exceeds the inline limit.
/// Returns the file names written.
std::vector<std::string> write_wavefunction(const std::filesystem::path& dir, const std::string& stem,
                                            const WaveState& psi);
/// Reads from the JSON file written by write_wavefunction (checks the CRC-32).
WaveState read_wavefunction(const std::filesystem::path& json_path);

std::string format_double(double v);

}  // namespace fga
