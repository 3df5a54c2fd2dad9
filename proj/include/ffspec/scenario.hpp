#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ffspec/io.hpp"
#include "ffspec/scatterer.hpp"
#include "ffspec/specfun.hpp"

namespace ffspec::scenario {

enum class Task { Forward, Spectrum, Translation, Retrieve, Compare };
std::string to_string(Task t);

/// Parsed scenario file. Non-compare tasks use the first scatterer.
struct ScenarioConfig {
    std::string name;
    std::vector<ScattererSpec> scatterers;
    double wavenumber = 1.0;
    DirectionRule rule;
    /// max_order == 0 selects default_truncation(kR).
    specfun::SeriesTruncation truncation;
    std::vector<Task> tasks;
    /// {"<task>": {"<check>": threshold}} overrides.
    io::json tolerances = io::json::object();
    /// {"<task>": {...}} task parameters.
    io::json task_options = io::json::object();
    std::string output_dir;
    std::int64_t seed = 0;
    /// Config as read, echoed into the report.
    io::json source;
};

/// Validates the whole document and throws one ConfigError listing every
/// problem found.
ScenarioConfig parse_config(const io::json& j);
ScenarioConfig load_config(const std::filesystem::path& file);

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string comparison;  // "<=", ">=", ">"
    bool passed = false;
};

struct TaskReport {
    Task task = Task::Forward;
    /// "pass", "fail" (a check failed) or "error" (the task threw).
    std::string status = "pass";
    std::string error;
    double wall_time = 0.0;
    io::json metrics = io::json::object();
    std::vector<Check> checks;
    std::vector<std::string> artifacts;
};

struct RunReport {
    std::string scenario;
    std::vector<TaskReport> tasks;
    double wall_time = 0.0;
    int exit_code = 0;

    bool passed() const { return exit_code == 0; }
};

io::json to_json(const RunReport& report, const ScenarioConfig& config);

/// Runs every task in order into out_dir and writes report.json there.
/// Exit code 0 when all checks pass, 2 otherwise.
RunReport run(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Loads, validates and runs a config file; 1 on config errors (printed to err).
int run_file(const std::filesystem::path& config_path, const std::filesystem::path& out_dir_override,
             std::ostream& out, std::ostream& err);

/// Bundled scenarios covering every acceptance criterion.
std::vector<io::json> corpus();

/// Runs the corpus into out_dir/<name>/ and writes out_dir/corpus.json.
/// Exit code 0 when every scenario passes, 2 otherwise.
int run_corpus(const std::filesystem::path& out_dir, std::ostream& out);

}  // namespace ffspec::scenario
