#pragma once

#include "mrec/metric_space.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace mrec {

/// Isotropic Gaussian mixture description. Defaults reconstruct the 3-blob
/// planar mixture used for the synthetic matching experiments: unit-variance
/// components whose means are far apart relative to sigma and whose pairwise
/// mean distances are all distinct, so the mixture has no nontrivial
/// self-isometry.
struct SynthSpec {
  int n_total = 6000;
  std::vector<Eigen::VectorXd> means;
  std::vector<double> scales;   // per-component isotropic sigma
  std::vector<double> weights;  // sums to 1
  std::uint64_t seed = 0;

  static SynthSpec defaults(int n_total = 6000, std::uint64_t seed = 0);
};

/// Draw n_total samples with component labels; deterministic per seed.
std::pair<Eigen::MatrixXd, std::vector<int>> gen_gaussian_mixture(
    const SynthSpec& spec);

/// Disjoint uniform halves, sizes differing by at most one.
std::pair<std::vector<int>, std::vector<int>> split_half_indices(
    int n, std::uint64_t seed);

/// Split points+labels into two labeled Euclidean datasets.
std::pair<LabeledDataset, LabeledDataset> split_halves(
    const Eigen::MatrixXd& points, const std::vector<int>& labels,
    std::uint64_t seed);

/// K clusters of points_per_cluster points each, uniform in balls of radius
/// eta/2 around centers placed at mutual distance >= delta + eta. Requires
/// delta > 2 eta > 0. The realized sample is checked to satisfy
/// min inter-cluster Hausdorff distance > 2 max cluster diameter and is
/// resampled up to 10 times if it does not.
std::pair<Eigen::MatrixXd, std::vector<int>> gen_separated_clusters(
    int K, double delta, double eta, int points_per_cluster, int dim,
    std::uint64_t seed);

}  // namespace mrec
