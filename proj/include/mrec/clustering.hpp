#pragma once

#include "mrec/metric_space.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mrec {

/// Result of a clustering subroutine: a surjection of points onto cluster
/// indices plus one representative point per cluster.
struct ClusterAssignment {
  std::vector<int> assignment;       // point index -> cluster in [0, cluster_count)
  std::vector<int> representatives;  // cluster -> point index; assigned to its own cluster
  int cluster_count = 0;             // C' <= C requested (duplicates can shrink it)
  std::vector<int> masses;           // per-cluster point counts, sum = n

  /// max/min cluster size; diagnostic for the "roughly constant" condition.
  double balance_ratio() const;
};

/// Voronoi partition with C' = min(C, n) germs sampled uniformly without
/// replacement; each point goes to its nearest germ, ties to the lowest
/// germ (cluster) index. Germs self-assign, so no cluster is empty.
ClusterAssignment voronoi_partition(const MetricSpace& space, int C,
                                    std::uint64_t seed);

/// k-means++ seeding followed by Lloyd iterations until the assignment is a
/// fixpoint or max_iter passes. Representatives are medoids (member nearest
/// the centroid); an empty cluster steals the point farthest from its
/// centroid. Requires a coordinate backend.
ClusterAssignment kmeans_partition(const MetricSpace& space, int C,
                                   std::uint64_t seed, int max_iter = 100);

/// Max over clusters of the max intra-cluster pairwise distance ("r" of an
/// r-clustering).
double cluster_radius(const MetricSpace& space, const ClusterAssignment& a);

/// Restriction of the space to the representatives plus normalized cluster
/// masses (cluster size / n).
std::pair<MetricSpace, std::vector<double>> representative_space(
    const MetricSpace& space, const ClusterAssignment& a);

}  // namespace mrec
