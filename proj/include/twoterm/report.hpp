#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twoterm/analyzer.hpp"
#include "twoterm/powers.hpp"

namespace twoterm {

/// Process exit codes of a job.
enum ExitCode : int {
    kExitDefinite = 0,
    kExitConfig = 1,
    kExitScaleInvalid = 2,
    kExitIndeterminate = 3,
    kExitIo = 4,
};

/// Malformed or inconsistent job document.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct JobConfig {
    std::string f;
    /// Empty when the power-scale shortcut is used.
    std::string phi1, phi2;
    Domain domain;
    std::optional<double> T_reference;
    NumericsConfig numerics;
    AnalyzeOptions flags;
    std::optional<PowerScale> power_scale;
};

/// Parses a JSON job document; throws ConfigError.
JobConfig parse_job_config(std::string_view text);
/// Reads and parses a job file; throws IoError or ConfigError.
JobConfig load_job_config(const std::filesystem::path& path);

/// Everything a job produced. `report` is present unless the job failed
/// before the analysis ran.
struct JobResult {
    int exit_code = kExitConfig;
    std::string error;
    std::optional<JobConfig> config;
    std::optional<ExpansionReport> report;
    std::optional<PowerAnalysis> powers;
    std::optional<ScaleClause> invalid_clause;
    double invalid_witness = 0.0;
    std::optional<std::uint64_t> seed;
};

JobResult run_job(const JobConfig& cfg);

/// Loads and runs one job file; config and I/O failures become exit codes.
JobResult run_job_file(const std::filesystem::path& path);

/// Job files (*.json) of a batch directory in lexicographic order.
std::vector<std::filesystem::path> batch_jobs(const std::filesystem::path& dir);

/// Runs every job concurrently; results follow the order of `paths`.
std::vector<JobResult> run_batch(const std::vector<std::filesystem::path>& paths);

enum class ReportFormat { Text, Machine };

std::string render_report(const JobResult& job, ReportFormat format);
std::string render_text(const ExpansionReport& r);

/// The "report" object of the machine format, and its inverse.
std::string render_machine(const ExpansionReport& r);
ExpansionReport parse_machine(std::string_view doc);

/// CSV of (x, f1*, f2*, F*, R) on the validation grid of the job's scale.
std::string dump_grid(const JobConfig& cfg, const ExpansionReport& r);

}  // namespace twoterm
