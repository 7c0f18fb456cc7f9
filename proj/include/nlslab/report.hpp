#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlslab/experiments.hpp"

namespace nlslab {

/// The machine-readable record. Contains no timestamps or host details, so
/// identical runs give identical bytes.
std::string report_record(const ExperimentReport& report);

/// Human-readable verdict listing.
std::string report_summary(const ExperimentReport& report);

/// abscissa,value,log_abscissa,log_value with one row per sample.
std::string fit_table(const DecayFit& fit);

struct WrittenReport {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
};

/// Creates a fresh subdirectory <root>/<experiment_id>/<UTC timestamp>[-k]
/// and writes record.json, summary.txt, and fit_<name>.csv / .svg per fit.
/// Existing directories are never reused. Throws std::runtime_error on I/O
/// failure.
WrittenReport write_report(ExperimentReport report, const std::filesystem::path& root);

/// Log-log scatter of the samples with the fitted line (green on pass, red on
/// fail) and the theory slope drawn through the sample centroid. Same input,
/// same bytes. Throws std::invalid_argument with fewer than 4 samples.
std::string render_plot(const DecayFit& fit);
void render_plot(const DecayFit& fit, const std::filesystem::path& path);

}  // namespace nlslab
