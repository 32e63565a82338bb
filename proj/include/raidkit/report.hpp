#pragma once

// One CLI invocation: validate a RunConfig, build the (A, B) pairs, run the
// requested decompositions and write reports, matrices and plots.
//
// Exit status: 0 success, 2 invalid arguments or unreadable input, 3
// numerical failure.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "raidkit/experiments.hpp"
#include "raidkit/interp_decomp.hpp"
#include "raidkit/linalg.hpp"
#include "raidkit/matrix.hpp"
#include "raidkit/regression_aware.hpp"

namespace raidkit {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;  // id, raid, rapca, cca or preset
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> a_path;
  std::optional<std::filesystem::path> b_path;
  std::optional<std::size_t> k;
  std::optional<double> eps;
  Method method = Method::qr;
  NormKind norm = NormKind::spectral;
  std::optional<double> rank_tol;
  std::uint64_t seed = 0;
  std::size_t rows = kDefaultTimeseriesRows;
  std::vector<std::size_t> lags;
  std::optional<std::filesystem::path> data_dir;
  std::filesystem::path out_dir = "raidkit-out";
  OutputFormat format = OutputFormat::csv;
  bool strengthen = false;
  bool download = false;
};

struct ExperimentReport {
  std::string command;
  std::string preset;  // empty for file inputs
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> metrics;  // in the configured norm
  std::vector<double> cca_spectrum;
  std::vector<double> rapca_spectrum;
  std::optional<IDResult> id;
  std::optional<RAIDResult> raid;
  std::optional<RAPCAResult> rapca;
  DenseMatrix biplot_scores;    // rows of B, 2 columns
  DenseMatrix biplot_loadings;  // columns of B, 2 columns
  std::filesystem::path subdir;  // relative to out_dir
};

struct RunOutcome {
  int exit_status = 0;
  std::vector<ExperimentReport> reports;
};

/// Throws ContractViolation naming the offending flag.
void validate(const RunConfig& config);

/// Resolution order: config.data_dir, RAIDKIT_DATA_DIR, ./data.
std::filesystem::path resolve_data_dir(const RunConfig& config);

/// Runs and writes everything; diagnostics go to err, the summary to out.
RunOutcome run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The report JSON exactly as written to report.json.
std::string report_json(const ExperimentReport& report);

struct LabeledPair {
  std::optional<std::size_t> lag;
  ExperimentPair pair;
};

/// The pairs a preset expands to, one per lag.
std::vector<LabeledPair> preset_pairs(const RunConfig& config);

/// Fetches the datasets with curl and unzip into the data directory.
void download_datasets(const std::filesystem::path& data_dir, std::ostream& err);

}  // namespace raidkit
