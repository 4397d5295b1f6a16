#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkmirage/perturb.hpp"
#include "linkmirage/privacy.hpp"

namespace linkmirage {

/// Invalid or incomplete configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required artifact of an earlier stage is missing or stale (exit code 4).
class MissingArtifactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitMissing = 4;

/// Flat key -> value settings, as read from a config file or the command line.
using Settings = std::map<std::string, std::string>;

/// Reads "key = value" lines; '#' starts a comment. Unknown keys are kept and
/// rejected later by the command that parses them.
Settings read_settings_file(const std::filesystem::path& path);

/// Keys understood by perturb / metrics / eval / report.
const std::vector<std::string>& run_setting_keys();

struct RawQuery {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    std::size_t t = 0;
};

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path out;
    PerturbParams params;
    std::string mechanism = "linkmirage";
    std::vector<std::string> metrics;
    std::size_t samples = 200;
    std::vector<unsigned> ls{1};
    std::optional<RawQuery> query;
    double f = 0.1;
    double epsilon = 0.05;
    double damping = 0.85;
    bool lazy = false;
    std::vector<std::string> evals;
    std::filesystem::path sybil_config;
    PriorKind prior = PriorKind::kWorstCase;
    std::vector<std::uint64_t> targets;
};

/// Validates settings into a RunConfig; throws ConfigError.
RunConfig make_run_config(const Settings& settings);

/// Hash over everything that determines the perturbed output: mechanism,
/// parameters, seed, library version and the bytes of every input snapshot.
/// Thread count and output directory are excluded.
std::string config_hash(const RunConfig& config);

/// Writes g_prime_<t>.txt, vertex_map.csv, record.json and provenance.json
/// (plus clustering_<t>.csv and merge_history_<t>.json for LinkMirage).
void cmd_perturb(const RunConfig& config);

/// Writes metrics.csv and metrics.json from a finished perturb run.
void cmd_metrics(const RunConfig& config);

/// Writes eval.csv: attack probability, sampling probability, sybil harness.
void cmd_eval(const RunConfig& config);

/// Concatenates metrics.csv and eval.csv of the output directory into report.csv.
void cmd_report(const RunConfig& config);

struct GenerateConfig {
    std::filesystem::path out;
    std::uint64_t seed = 0;
    std::size_t vertices = 300;
    std::size_t groups = 6;
    double p_in = 0.1;
    double p_out = 0.004;
    std::size_t snapshots = 5;
    double overlap = 0.8;
};

GenerateConfig make_generate_config(const Settings& settings);

/// Writes snapshot_<t>.txt files and manifest.txt of a synthetic
/// planted-partition sequence.
void cmd_generate(const GenerateConfig& config);

/// Maps the exception currently being handled to an exit code and message.
int exit_code_for_current_exception(std::string& message);

}  // namespace linkmirage
