#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mrec {

/// A finite metric space with an interchangeable distance backend.
///
/// Three backends are supported: an explicit symmetric distance matrix, a
/// point list in R^d under a Minkowski norm (distances computed on demand,
/// memoized as a full matrix only when the root space is small enough), and
/// a geodesic table derived from a symmetric kNN graph.
///
/// Instances are immutable after construction and cheap to copy: a restricted
/// space shares its parent's backend and only carries an index map, so
/// distances of a restriction are identical to the parent's. Safe for
/// concurrent reads.
class MetricSpace {
 public:
  /// Points in R^d under the Minkowski norm with the given exponent (>= 1).
  /// The full n x n matrix is precomputed only when n <= memo_cap.
  static MetricSpace euclidean(Eigen::MatrixXd points, double exponent = 2.0,
                               int memo_cap = 4096);

  /// Explicit distance matrix: square, symmetric within 1e-9, zero diagonal,
  /// nonnegative. Stored as (M + M^T)/2 with the diagonal forced to zero.
  static MetricSpace from_matrix(Eigen::MatrixXd m);

  /// Geodesic distances on the union-symmetrized kNN graph of the points,
  /// with Euclidean edge weights. Throws if the graph is disconnected,
  /// naming the number of components. Requires 1 <= k < n.
  static MetricSpace knn_geodesic(const Eigen::MatrixXd& points, int k);

  int size() const { return static_cast<int>(rows_.size()); }
  double distance(int i, int j) const;

  /// Subspace on the given distinct, in-range indices. Distances are the
  /// parent's; point_ids map back to the parent's ids.
  MetricSpace restrict_to(std::span<const int> indices) const;

  /// Max pairwise distance; 0 for a singleton. O(n^2) for computed backends.
  double diameter() const;

  /// Stable external index of local point i (row order of the root input).
  int point_id(int i) const { return ids_[i]; }
  const std::vector<int>& point_ids() const { return ids_; }

  /// True when the backend carries coordinates (needed by k-means and by
  /// cross-space Wasserstein costs).
  bool has_points() const;
  int point_dim() const;
  Eigen::RowVectorXd point(int i) const;
  double minkowski_exponent() const;

  /// Materialize the n x n distance matrix of this (sub)space.
  Eigen::MatrixXd distance_matrix() const;

 private:
  struct Backend;
  MetricSpace(std::shared_ptr<const Backend> b, std::vector<int> rows,
              std::vector<int> ids);

  std::shared_ptr<const Backend> backend_;
  std::vector<int> rows_;  // local index -> backend row
  std::vector<int> ids_;   // local index -> external id
};

/// A metric space plus optional per-point categorical labels.
struct LabeledDataset {
  MetricSpace space;
  std::optional<std::vector<std::string>> labels;

  LabeledDataset(MetricSpace s, std::optional<std::vector<std::string>> l);
};

}  // namespace mrec
