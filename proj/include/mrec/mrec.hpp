#pragma once

#include "mrec/clustering.hpp"
#include "mrec/metric_space.hpp"
#include "mrec/transport.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mrec {

enum class ClustererKind { kVoronoi, kKmeans };
enum class MatcherKind { kGw, kWasserstein, kFused };

/// Black-box matcher selection shared by leaves and representative levels.
struct MatcherConfig {
  MatcherKind kind = MatcherKind::kGw;
  double epsilon = 1e-2;
  int p = 2;
  double alpha = 0.5;  // fused blend weight
  RoundingMode rounding = RoundingMode::kArgmax;
  int max_outer = 50;
  int max_inner = 1000;
  double tol = 1e-6;
};

struct MrecParams {
  int C = 10;          // clusters per level, >= 2
  int T = 10;          // leaf threshold
  int max_depth = 32;  // safety bound against non-shrinking recursion
  ClustererKind clusterer = ClustererKind::kVoronoi;
  std::uint64_t seed = 0;
  bool mass_weighted = true;  // interior marginals from cluster sizes
  /// A cluster pair whose coupling mass falls below this fraction of its
  /// row's maximum is dropped; both clusters are merged into neighbouring
  /// blocks instead of recursing against a structurally wrong partner.
  double pair_mass_floor = 0.1;
  MatcherConfig matcher;
  /// Full |X| x |Y| linear cost (row/column order of the input spaces);
  /// required by the fused matcher, sliced per subproblem. Not owned.
  const Eigen::MatrixXd* linear_cost = nullptr;
};

struct TraceNode {
  std::vector<int> path;  // branch indices from the root
  int depth = 0;
  int nx = 0;
  int ny = 0;
  double radius_x = 0.0;  // cluster radii at interior nodes
  double radius_y = 0.0;
  double matcher_cost = 0.0;
  bool matcher_converged = false;
  double seconds = 0.0;  // node's own work, children excluded
  bool leaf = false;
  bool forced_leaf = false;  // clustering failed to split a large node
};

struct RecursionTrace {
  std::vector<TraceNode> nodes;  // preorder, children in branch order
};

struct MrecResult {
  Matching matching;  // indexed by the input spaces' positions
  RecursionTrace trace;
};

struct WorkEstimate {
  int depth = 0;
  long long leaves = 0;
};

/// Run the black-box matcher on two (sub)spaces with the given marginals:
/// gw uses the two distance matrices, wasserstein a cross-space cost from
/// shared coordinates, fused blends gw with a slice of full_linear_cost
/// taken at the subspaces' point ids.
MatchResult match_spaces(const MetricSpace& X, const MetricSpace& Y,
                         const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                         const MatcherConfig& cfg,
                         const Eigen::MatrixXd* full_linear_cost = nullptr);

/// Maximum-weight pairing of clusters from a representative coupling:
/// injective on the smaller side, deterministic ties, sorted by the first
/// component.
std::vector<std::pair<int, int>> pair_clusters(const Eigen::MatrixXd& coupling);

/// Recursive decomposition matching: cluster both spaces, match the
/// representative spaces, pair clusters by transported mass, recurse on the
/// paired preimages; leaves (size <= T on either side) run the matcher
/// directly and are rounded to a hard matching. Orphan clusters (when the
/// two sides yield different cluster counts) merge into the block of their
/// nearest matched representative.
MrecResult mrec_match(const MetricSpace& X, const MetricSpace& Y,
                      const MrecParams& params);

/// Planning heuristic: expected recursion depth and leaf count.
WorkEstimate estimate_work(long long n, const MrecParams& params);

}  // namespace mrec
