#pragma once

#include "mrec/metric_space.hpp"
#include "mrec/transport.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mrec {

struct DistortionOptions {
  int exact_cap = 4096;        // exact sup up to this many points
  std::int64_t samples = 1'000'000;  // Monte-Carlo pair samples above the cap
  std::uint64_t seed = 0;
};

struct DistortionEstimate {
  double value = 0.0;
  bool estimated = false;  // true when Monte-Carlo sampled
};

/// Evaluation summary for one matching run.
struct EvalReport {
  double distortion = 0.0;
  bool distortion_estimated = false;
  std::optional<double> accuracy;
  std::optional<double> auc;
  double runtime_seconds = 0.0;
};

/// Distortion of the matching's graph: sup over pairs of matched pairs of
/// |dX(x,x') - dY(m(x),m(x'))|. Exact when |X| <= exact_cap, otherwise a
/// seeded Monte-Carlo estimate over at least `samples` sampled pairs.
DistortionEstimate matching_distortion(const Matching& m, const MetricSpace& X,
                                       const MetricSpace& Y,
                                       const DistortionOptions& opts = {});

/// Fraction of X points whose matched Y point carries the same label.
double label_accuracy(const Matching& m,
                      const std::vector<std::string>& labels_x,
                      const std::vector<std::string>& labels_y);

/// Normalized area under r -> fraction of points whose match lands within
/// distance r of its ground-truth partner, integrated exactly over the step
/// curve on [0, diam(Y)] and divided by diam(Y). A perfect matching gives 1.
double correspondence_auc(const Matching& m, const std::vector<int>& true_map,
                          const MetricSpace& Y);

}  // namespace mrec
