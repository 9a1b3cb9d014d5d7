#pragma once

#include <iosfwd>
#include <string>

#include "fitsim/experiment.hpp"

namespace fitsim {

// Reads the documented JSON schema, fills defaults, rejects unknown keys.
// ParseError for unreadable or malformed files, ValidationError naming the
// offending field otherwise.
ExperimentSpec load_config(const std::string& path);

// CSV with a `total_wait` column (extra columns ignored). Values must be
// finite and nonnegative.
Sample load_reference_sample(const std::string& path);

enum class ReportFormat { Json, Csv, SvgHistogram };

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& out_path);

std::string report_to_json_string(const ExperimentReport& report);
ExperimentReport load_report(const std::string& path);

// Byte-for-byte equality of the serialized reports with the volatile block
// (timestamp, wall timings) stripped.
bool reports_equivalent(const ExperimentReport& a, const ExperimentReport& b);

// Table-shaped summary: model,mean,std_dev,variance.
void write_summary_csv(const ExperimentReport& report, std::ostream& out);

// Overlaid frequency distributions of the pooled waiting times.
void write_histogram_svg(const ExperimentReport& report, std::ostream& out);

// Per-customer waits of one replication:
// customer_id,arrival_time,total_wait,entry_wait,help_wait,return_wait
void write_waiting_sample_csv(const ReplicationResult& result, std::ostream& out);

// Frequency distribution rows: bin_start,bin_end,count
void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out);

// Loadable config file for a scenario (wrapped as {"scenario": ...}).
std::string scenario_to_config_json(const ScenarioConfig& config);

}  // namespace fitsim
