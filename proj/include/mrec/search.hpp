#pragma once

#include "mrec/evaluation.hpp"
#include "mrec/metric_space.hpp"
#include "mrec/mrec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mrec {

/// Parameter grid for the distortion-driven search: matchers x epsilons x
/// cluster counts, each replicated runs_per_cell times with derived seeds.
struct SweepGrid {
  std::vector<double> epsilon_values;
  std::vector<int> C_values;
  std::vector<MatcherConfig> matchers;
  int runs_per_cell = 20;
  std::uint64_t base_seed = 0;

  /// The protocol grid: epsilon 10 down to 1e-4 and C 10 to 1000, both
  /// log-spaced, one entropic-GW matcher, 20 runs per cell.
  static SweepGrid defaults();
};

struct SweepCell {
  int matcher_index = 0;
  double epsilon = 0.0;
  int C = 0;
  int run = 0;
  std::uint64_t seed = 0;
  double distortion = 0.0;
  bool distortion_estimated = false;
  std::optional<double> accuracy;
  double runtime_seconds = 0.0;
  bool matcher_converged = false;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepCell> table;  // fixed cell order; failures recorded in place
  int best_index = -1;           // minimum-distortion non-failed cell
  Matching best_matching;
  EvalReport best_report;
};

/// One aggregate row per C value (ascending): statistics of the best
/// (matcher, epsilon) group at that C, where "best" minimizes mean
/// distortion over the group's successful runs. Variances are population
/// variances.
struct CurveRow {
  int C = 0;
  double mean_distortion = 0.0;
  double var_distortion = 0.0;
  double mean_accuracy = 0.0;  // NaN when labels were absent
  double var_accuracy = 0.0;
  double mean_runtime_seconds = 0.0;
};

/// Exhaustive grid search: runs mrec_match per cell (cells execute
/// concurrently up to `workers`), scores each matching by distortion, and
/// selects the minimum-distortion cell. Cell failures are recorded in the
/// table and never abort the sweep. Reproducible for a fixed base_seed
/// regardless of the worker count.
SweepResult sweep(const MetricSpace& X, const MetricSpace& Y,
                  const MrecParams& base, const SweepGrid& grid,
                  const std::optional<std::vector<std::string>>& labels_x,
                  const std::optional<std::vector<std::string>>& labels_y,
                  int workers = 1, const DistortionOptions& dist_opts = {});

std::vector<CurveRow> curve_export(const std::vector<SweepCell>& table);

}  // namespace mrec
