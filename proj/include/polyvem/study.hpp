#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyvem/datasets.hpp"
#include "polyvem/quality.hpp"
#include "polyvem/vem_global.hpp"

namespace polyvem {

/// Raised when an output file cannot be written or an input cannot be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyDataset {
  DatasetSpec spec;
  int levels = 4;  ///< meshes 0..levels
};

struct StudyConfig {
  std::vector<StudyDataset> datasets;
  std::vector<int> orders = {1, 2, 3};
  ElementOptions element;
  std::string problem = "sine";  ///< "sine" or "poly" (u in P_k for each k)
  bool quality_only = false;
  bool plots = true;
};

/// Throws std::invalid_argument on an empty dataset list, orders outside
/// {1,2,3}, or an unknown problem name.
void check_config(const StudyConfig& config);

/// JSON layout:
///   {"datasets": [{"kind": "jenga", "nel": 4, "levels": 5, "seed": 0,
///                  "N": 10, "d0": 0.03, "t_min": 0, "t_max": 0.95}],
///    "orders": [1, 2, 3], "stab": "drecipe", "basis": "ortho",
///    "problem": "sine", "quality_only": false, "plots": true}
/// Only "datasets" is required.
StudyConfig parse_study_config(const std::string& json_text);
std::string study_config_json(const StudyConfig& config);

struct StudyRow {
  std::string dataset;
  int level = 0;
  int k = 0;
  SolveReport report;
  double rho = 0.0;
  double A_ratio = 0.0;
  double e_ratio = 0.0;
  bool failed = false;  ///< generation or solve threw; numeric columns are FAIL
  std::string status;
};

using StudyProgress = std::function<void(const std::string&)>;

/// Runs every (dataset, level, k) job. Meshes are generated once per level;
/// jobs run on the worker pool and rows come back ordered by
/// (dataset, level, k). Failures are recorded in the row.
std::vector<StudyRow> run_study(const StudyConfig& config, const StudyProgress& progress = {});

/// Appends "blowup" to the status of every row whose relative L2 error
/// exceeds the one of the previous level (same dataset and k).
void flag_blowup(std::vector<StudyRow>& rows);

/// Columns: dataset, level, k, n_dof, h, err_L2_rel, err_H1_rel,
/// max_log10_cond_G, max_log10_cond_H, max_log10_pinabla_id,
/// max_log10_pi0_id, rho, A_ratio, e_ratio, status. Non-finite values and
/// failed rows print FAIL.
std::string results_csv(const std::vector<StudyRow>& rows);
std::vector<StudyRow> parse_results_csv(const std::string& text);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x, log y); pairs with a non-positive or
/// non-finite entry are skipped.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceSlopes {
  SlopeFit l2_vs_h, h1_vs_h;
};

/// Fit over the rows of one dataset and order, optionally restricted to
/// levels >= first_level.
ConvergenceSlopes convergence_slopes(const std::vector<StudyRow>& rows, const std::string& dataset, int k,
                                     int first_level = 0);

/// Writes <name>_<n>.off for n = 0..levels and manifest.json with the spec
/// and per-level h, A_ratio, e_ratio. Returns the written paths.
std::vector<std::filesystem::path> write_dataset(const DatasetSpec& spec, int levels,
                                                 const std::filesystem::path& out_dir);

/// Output of run_study_to_dir.
struct StudyFiles {
  std::vector<std::filesystem::path> written;
  std::vector<StudyRow> rows;
};

/// Runs the study and writes results.csv (or quality_<name>.csv per dataset
/// for quality-only studies), config.json and, when enabled, SVG plots.
StudyFiles run_study_to_dir(const StudyConfig& config, const std::filesystem::path& out_dir,
                            const StudyProgress& progress = {});

/// Error plots (L2 and H1 against n_dof, one series per k) for every dataset
/// in the rows. Returns the written paths.
std::vector<std::filesystem::path> write_error_plots(const std::vector<StudyRow>& rows,
                                                     const std::filesystem::path& out_dir);

}  // namespace polyvem
