#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "socnav/crowd.hpp"

namespace socnav {

/// Thrown on malformed or inconsistent configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Declarative description of one benchmark run.
struct BenchConfig {
    std::vector<std::string> controllers;  ///< defaults to the 13 named ones
    std::vector<ScenarioKind> scenarios = {ScenarioKind::circular,
                                           ScenarioKind::random,
                                           ScenarioKind::parallel};
    int n_ped_min = 3;
    int n_ped_max = 8;
    int scenes_per_cell = 5;
    std::uint64_t master_seed = 20240601;
    int jobs = 1;
    bool trace = false;
    std::string output_dir = "bench_out";

    SimParams sim;
    ControllerDefaults controller_defaults;
    ScenarioParams scenario;

    /// Throws ConfigError on invalid names, counts, or parameter values.
    void validate() const;
};

BenchConfig default_config();

/// Parses the TOML-style config format emitted by print_default_config.
/// Throws ConfigError with a line number on malformed input.
BenchConfig parse_config_text(const std::string& text);
BenchConfig load_config(const std::filesystem::path& path);

/// Renders a config, including every default, in the accepted format.
std::string print_config(const BenchConfig& cfg);

/// Runs every (scenario, n_ped, scene index) x controller episode. Scenes are
/// generated once per (cell, index) and shared across controllers. Records
/// come back canonically sorted regardless of the worker pool size.
std::vector<RunRecord> run_suite(const BenchConfig& cfg);

/// Quartiles by linear interpolation plus the arithmetic mean.
StatsQuartiles quartile_stats(std::vector<double> values);

/// Per-(scenario, n_ped, controller) statistics. Timeout episodes are
/// excluded from the steps-to-target metric only.
std::vector<MetricsSummary> aggregate(const std::vector<RunRecord>& records);

/// "Q1 | Median | Mean | Q2" cell in the results-table layout.
std::string format_stat_row(const StatsQuartiles& s);

/// CSV column order of the records file.
extern const char* const kRecordsCsvHeader;

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& text);
std::vector<RunRecord> load_records(const std::filesystem::path& path);

std::string summaries_to_csv(const std::vector<MetricsSummary>& summaries);

/// Aligned text table mirroring the results-table layout.
std::string summaries_to_table(const std::vector<MetricsSummary>& summaries);

/// Fails fast if the output directory cannot be created or written.
void emit_preflight(const BenchConfig& cfg);

/// Writes records.csv, summary.csv, summary.txt, manifest.json and any traces
/// into cfg.output_dir. Byte-stable across reruns of the same config.
void emit(const std::vector<MetricsSummary>& summaries,
          const std::vector<RunRecord>& records, const BenchConfig& cfg);

}  // namespace socnav
