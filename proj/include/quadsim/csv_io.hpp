#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "quadsim/metrics.hpp"
#include "quadsim/sim.hpp"

namespace quadsim {

// Stable run-log schema; angles and references in degrees, rates in deg/s,
// torques/gains/disturbances in SI units, sat_flags a per-axis bitmask.
extern const char* const kRunCsvHeader;

// Writes atomically (temp file + rename). A failed run gets a trailing
// '# aborted: ...' comment after the partial rows.
void write_run_csv(const RunLog& log, const std::filesystem::path& path);

std::string run_csv_text(const RunLog& log);

// Per-step metrics of a single run.
std::string step_metrics_csv(const std::vector<StepMetrics>& metrics);

// Cross-controller comparison, one row per controller/event.
std::string comparison_csv(const ComparisonTable& table);

// Aligned plain-text rendering of the same comparison.
std::string comparison_text(const ComparisonTable& table);

void write_text_atomic(const std::string& content, const std::filesystem::path& path);

}  // namespace quadsim
