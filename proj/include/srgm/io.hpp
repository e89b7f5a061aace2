#pragma once

// File formats shared by the command-line tool: CSV ingestion for fault
// data, module metrics and test actuals, plus the JSON conventions used by
// every report (sorted keys, numbers at 10 significant digits).

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "srgm/decision.hpp"
#include "srgm/metrics.hpp"
#include "srgm/nhpp.hpp"

namespace srgm::io {

using Json = nlohmann::json;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  ///< 1-based source line of each row
};

/// Comma-separated, first non-blank line is the header, fields are trimmed,
/// blank lines and lines starting with '#' are skipped. Errors cite
/// `source:line`.
CsvTable parse_csv(std::string_view text, std::string_view source);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// "fnv1a64:<16 hex digits>" of the bytes.
std::string checksum(std::string_view bytes);

/// Rounds to 10 significant digits (and maps -0 to 0).
double round_sig10(double v);

/// printf "%.10g".
std::string format_number(double v);

/// Recursively rounds every floating-point number, then serializes with
/// two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// Header `time,cumulative_faults`.
FaultDataset parse_fault_csv(std::string_view text, std::string_view source,
                             std::string time_unit = "unspecified");

/// One row per module. Required columns: id, procedure_ccs, lloc. List
/// cells are semicolon separated; layout transitions are `freq:cost` pairs.
std::vector<ModuleRecord> parse_metrics_csv(std::string_view text, std::string_view source);

/// Header `category,actual_time,actual_cost,faults_found[,faults_tolerated]`;
/// a missing tolerance falls back to `default_tolerance`.
std::vector<CategoryActuals> parse_actuals_csv(
    std::string_view text, std::string_view source,
    const std::map<Category, std::uint64_t>& default_tolerance);

/// {"model": "go", "params": {"a": .., "b": ..}}
Json model_to_json(const ModelParams& p);
ModelParams model_from_json(const Json& j);

/// Run-level settings read from the JSON config file.
struct NetworkConfig {
    std::size_t hidden = 8;
    double theta = 1.0;
    double learning_rate = 0.5;
    int epochs = 5000;
    std::uint64_t seed = 42;
};

struct ProjectConfig {
    CostParams costs;
    double stringency = 0.3;
    double cost_odds = 0.5;
    StringencyMode stringency_mode = StringencyMode::cumulative;
    DeltaKind delta_kind = DeltaKind::weighted;
    CategoryThresholds thresholds;
    std::map<Category, std::uint64_t> fault_tolerance;  ///< defaults to 0 per category
    NetworkConfig network;
    std::optional<ModelKind> current_model;
    std::optional<ModelKind> previous_model;

    /// InputError on any violated invariant.
    void validate() const;
};

ProjectConfig parse_config(std::string_view text, std::string_view source);
Json config_to_json(const ProjectConfig& config);

}  // namespace srgm::io
