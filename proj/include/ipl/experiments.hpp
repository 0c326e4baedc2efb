#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipl/analysis.hpp"
#include "ipl/eigensolver.hpp"
#include "ipl/hamiltonian.hpp"
#include "ipl/profiles.hpp"

namespace ipl {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class MapSelection { all, lower_band, lowest_states };

std::string_view to_string(MapSelection selection);
MapSelection map_selection_from_string(std::string_view name);

/// Which eigenstates go into map.pgm; `count` applies to lowest_states.
struct MapSpec {
  MapSelection selection = MapSelection::all;
  std::size_t count = 0;
  bool operator==(const MapSpec&) const = default;
};

enum class Artifact { csv, pgm, json };

std::string_view to_string(Artifact artifact);
Artifact artifact_from_string(std::string_view name);
std::set<Artifact> all_artifacts();

/// Everything needed to reproduce one run. A nonempty `sweep_lf` turns the
/// run into an L_f sweep over a linear base profile.
struct RunConfig {
  std::string preset;
  ProfileSpec profile;
  CellParams params;
  AnalysisOptions options;
  MapSpec map;
  std::vector<double> sweep_lf;

  int sites() const noexcept { return 2 * profile.cells; }
  bool operator==(const RunConfig&) const = default;
};

struct Preset {
  std::string name;
  std::string description;
  RunConfig config;
};

const std::vector<Preset>& presets();
/// Throws InvalidArgument for unknown names.
const Preset& find_preset(std::string_view name);

/// Linear grid of the given scaling factor centered on `center`.
ProfileSpec linear_spec(double center, double lf, int cells);
/// 25 logarithmically spaced values in [0.5, 100].
std::vector<double> default_lf_grid();

/// Configuration used by `run` when no flag overrides it: symmetric linear
/// grid, L_f = 1, N_s = 402, d1 = 1, d2 = 2, eps = 0.2.
RunConfig default_run_config();

/// Keys: profile, d1, d2, eps, sites, cells, phi_start, phi_end, center, lf,
/// revolutions, seed, tau, delta_rel, gamma, nb. Values are decimal strings;
/// angles also accept pi expressions.
using Overrides = std::map<std::string, std::string>;
RunConfig apply_overrides(RunConfig config, const Overrides& overrides);

struct RunResult {
  TridiagonalHamiltonian hamiltonian;
  EigenSystem eig;
  SpectralReport report;
};

TridiagonalHamiltonian build_hamiltonian(const RunConfig& config);
RunResult run_pipeline(const RunConfig& config);
IndexRange map_range(const RunConfig& config, const SpectralReport& report);

struct SweepRow {
  double lf = 0.0;
  double fraction = 0.0;
  std::string error;
};

/// One pipeline run per L_f on the linear grid of `base` (center kept).
/// Rows follow input order. Worker count is min(threads, IPL_THREADS) with
/// threads = 0 meaning hardware concurrency.
std::vector<SweepRow> sweep_lf(std::span<const double> lf_values, const RunConfig& base,
                               unsigned threads = 0);
std::string sweep_csv(std::span<const SweepRow> rows);

struct ArtifactRecord {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
  bool operator==(const ArtifactRecord&) const = default;
};

struct RunManifest {
  std::string tool_version{kToolVersion};
  RunConfig config;
  std::set<Artifact> emit;
  std::vector<ArtifactRecord> artifacts;
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest load_manifest(const std::filesystem::path& path);

nlohmann::json summary_json(const RunConfig& config, const RunResult& result);

/// Runs the pipeline (or sweep) and writes the selected artifacts plus
/// manifest.json into `out`, creating it if needed.
RunManifest execute(const RunConfig& config, const std::filesystem::path& out,
                    const std::set<Artifact>& emit = all_artifacts());
RunManifest run_preset(std::string_view name, const Overrides& overrides,
                       const std::filesystem::path& out,
                       const std::set<Artifact>& emit = all_artifacts());
/// Re-executes a saved manifest into `out`.
RunManifest replay_manifest(const std::filesystem::path& manifest_path,
                            const std::filesystem::path& out);

/// Random lattice for oracle checks: even N_s in [4, max_sites], random kind
/// (linear, revolutions, random phase, random on-site), d1 < d2 and eps > 0.
TridiagonalHamiltonian random_instance(std::uint64_t seed, int max_sites);

struct OracleComparison {
  std::size_t sites = 0;
  double max_value_diff = 0.0;
  double residual_bound = 0.0;
  double ortho_bound = 0.0;
  bool pass(double tol) const noexcept {
    return max_value_diff <= tol && residual_bound <= tol && ortho_bound <= tol;
  }
};

/// QL eigenpairs against the dense Jacobi oracle.
OracleComparison compare_with_oracle(const TridiagonalHamiltonian& h);

}  // namespace ipl
