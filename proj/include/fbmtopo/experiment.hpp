#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbmtopo/embedding.hpp"
#include "fbmtopo/fbm.hpp"
#include "fbmtopo/measures.hpp"
#include "fbmtopo/persistence.hpp"

namespace fbmtopo {

enum class Scale { desk, paper };

/// Parameter grid and run settings for a Monte Carlo sweep.
struct ExperimentConfig {
  std::vector<double> hurst_list{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::size_t> taus{1, 10, 100, 1000};
  std::vector<double> qs{0.00, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
  std::size_t n_points = 1024;
  std::size_t realizations = 1000;
  double epsilon_max_factor = 0.2;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  std::size_t grid_resolution = 100;
  FbmMethod method = FbmMethod::spectral_fgn;

  /// Throws ConfigError when any invariant fails.
  void validate() const;
  std::size_t cell_count() const noexcept {
    return hurst_list.size() * dims.size() * taus.size() * qs.size();
  }
};

/// Defaults for a scale preset: desk = (N=256, R=100), paper = (N=1024, R=1000).
ExperimentConfig default_config(Scale scale);
Scale parse_scale(std::string_view name);

/// Reads `key = value` lines ('#' starts a comment, lists are comma separated)
/// on top of `base`. Unknown keys, malformed values and repeated keys throw
/// ConfigError.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// One grid point of the sweep; indices refer to the config lists.
struct Cell {
  std::size_t hurst_index = 0;
  std::size_t dim = 0;
  std::size_t delay = 0;
  std::size_t q_index = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Child seed for realization r of a cell: hash_seed(master, H index, D, tau, q index, r).
std::uint64_t realization_seed(std::uint64_t master_seed, const Cell& cell, std::size_t realization);

/// Everything the pipeline derives from one series.
struct PipelineResult {
  PointCloud cloud;
  std::size_t nominal_points = 0;    // T - (D-1) tau
  std::size_t usable_missing = 0;    // masked samples that are coordinates of some vector
  std::size_t merged_duplicates = 0;
  double epsilon_max = 0.0;
  PersistenceDiagram h0;
  PersistenceDiagram h1;
  TopologicalSummary summary;
};

/// Rescale -> delay-embed -> Rips filtration (epsilon_max = factor * sqrt(dim))
/// -> H0/H1 -> summary normalized by the regular cloud size T - (D-1) tau.
PipelineResult run_pipeline(const TimeSeries& series, std::size_t dim, std::size_t delay,
                            double epsilon_max_factor);

struct ResultRow {
  Cell cell;
  double hurst = 0.0;
  double q = 0.0;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;  // categorical reason when !ok
  TopologicalSummary summary;
  std::size_t cloud_size = 0;   // N(q)
  std::size_t t_missing = 0;
  std::size_t n_missing = 0;    // (T - (D-1) tau) - N(q)
  std::vector<double> beta0;    // normalized curves on the config grid
  std::vector<double> beta1;
  double wall_seconds = 0.0;    // not part of the deterministic outputs
};

struct ResultTable {
  ExperimentConfig config;
  std::vector<double> grid;     // eta grid for the exported curves
  std::vector<ResultRow> rows;  // canonical order: H, D, tau, q, realization

  std::size_t failed_count() const noexcept;
};

/// eta grid: grid_resolution points evenly spaced on [0, N * factor * sqrt(dim)].
std::vector<double> eta_grid(const ExperimentConfig& config, std::size_t dim);

/// Runs a single realization. Never throws for pipeline failures; the row is
/// marked failed with the reason instead.
ResultRow run_realization(const ExperimentConfig& config, const Cell& cell, std::size_t realization);

/// Runs every (cell, realization) on `workers` threads. Row order and contents
/// do not depend on the worker count.
ResultTable run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

/// Names of the nine measures, in output order.
inline constexpr std::string_view kMeasureNames[] = {
    "eta0_disappear", "B0", "E0", "eta1_appear", "eta1_disappear",
    "eta1_maximize",  "B1", "E1", "n1"};
inline constexpr std::size_t kMeasureCount = 9;

std::optional<double> measure_value(const TopologicalSummary& s, std::size_t index);

struct MeasureStats {
  std::size_t n = 0;  // non-absent values
  std::optional<double> mean;
  std::optional<double> sd;  // sample standard deviation, needs n >= 2
  std::optional<double> se;  // sd / sqrt(n)
};

struct AggregateRow {
  Cell cell;
  double hurst = 0.0;
  double q = 0.0;
  std::size_t count = 0;   // successful realizations
  std::size_t failed = 0;
  std::vector<MeasureStats> measures;  // kMeasureCount entries
  std::vector<double> mean_beta0;
  std::vector<double> mean_beta1;
  double mean_cloud_size = 0.0;

  bool empty() const noexcept { return count == 0; }
};

struct AggregateTable {
  std::vector<AggregateRow> rows;  // sorted by cell

  const AggregateRow* find(double hurst, std::size_t dim, std::size_t delay, double q) const;
};

MeasureStats describe(const std::vector<double>& values);

/// Per-cell mean / sd / se of every measure plus mean Betti curves. Input row
/// order does not matter.
AggregateTable aggregate(const ResultTable& table);

}  // namespace fbmtopo
