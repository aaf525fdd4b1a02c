#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mrec {

/// Minimum-cost square assignment (Hungarian with potentials, O(n^3)).
/// Returns row -> column. Deterministic; equal-cost alternatives resolve to
/// the lowest column index reachable first in ascending scan order.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Maximum-weight assignment on a (possibly rectangular) weight matrix,
/// padded internally with zero-weight slots. Returns one entry per row:
/// the matched column, or -1 for rows matched to a pad column (only possible
/// when rows > cols).
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight);

}  // namespace mrec
