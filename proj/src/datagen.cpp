#include "mrec/datagen.hpp"

#include "mrec/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mrec {

namespace {

std::vector<std::string> to_string_labels(const std::vector<int>& labels,
                                          const std::vector<int>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (const int i : idx) out.push_back(std::to_string(labels[i]));
  return out;
}

double hausdorff(const Eigen::MatrixXd& pts, const std::vector<int>& a,
                 const std::vector<int>& b) {
  const auto one_sided = [&](const std::vector<int>& from,
                             const std::vector<int>& to) {
    double worst = 0.0;
    for (const int i : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const int j : to)
        nearest = std::min(nearest, (pts.row(i) - pts.row(j)).norm());
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

SynthSpec SynthSpec::defaults(int n_total, std::uint64_t seed) {
  SynthSpec s;
  s.n_total = n_total;
  s.seed = seed;
  s.means.resize(3);
  s.means[0] = Eigen::Vector2d(0.0, 0.0);
  s.means[1] = Eigen::Vector2d(20.0, 0.0);
  s.means[2] = Eigen::Vector2d(0.0, 30.0);
  s.scales = {1.0, 1.0, 1.0};
  s.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return s;
}

std::pair<Eigen::MatrixXd, std::vector<int>> gen_gaussian_mixture(
    const SynthSpec& spec) {
  const size_t k = spec.means.size();
  if (k == 0 || spec.scales.size() != k || spec.weights.size() != k)
    throw std::invalid_argument("mixture spec: means/scales/weights sizes disagree");
  if (spec.n_total < 1) throw std::invalid_argument("mixture spec: n_total must be >= 1");
  const double wsum = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("mixture spec: weights must sum to 1");
  for (const double s : spec.scales)
    if (s < 0.0) throw std::invalid_argument("mixture spec: negative scale");
  const Eigen::Index d = spec.means[0].size();
  for (const auto& m : spec.means)
    if (m.size() != d) throw std::invalid_argument("mixture spec: mean dims disagree");

  std::mt19937_64 rng(spec.seed);
  std::discrete_distribution<int> comp(spec.weights.begin(), spec.weights.end());
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd pts(spec.n_total, d);
  std::vector<int> labels(spec.n_total);
  for (int i = 0; i < spec.n_total; ++i) {
    const int c = comp(rng);
    labels[i] = c;
    for (Eigen::Index j = 0; j < d; ++j)
      pts(i, j) = spec.means[c](j) + spec.scales[c] * gauss(rng);
  }
  return {std::move(pts), std::move(labels)};
}

std::pair<std::vector<int>, std::vector<int>> split_half_indices(
    int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("split needs at least 2 points");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  const int half = (n + 1) / 2;
  std::vector<int> a(perm.begin(), perm.begin() + half);
  std::vector<int> b(perm.begin() + half, perm.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {std::move(a), std::move(b)};
}

std::pair<LabeledDataset, LabeledDataset> split_halves(
    const Eigen::MatrixXd& points, const std::vector<int>& labels,
    std::uint64_t seed) {
  if (points.rows() != static_cast<Eigen::Index>(labels.size()))
    throw std::invalid_argument("points/labels sizes disagree");
  const auto [ia, ib] = split_half_indices(static_cast<int>(points.rows()), seed);
  const auto take = [&](const std::vector<int>& idx) {
    Eigen::MatrixXd p(idx.size(), points.cols());
    for (size_t r = 0; r < idx.size(); ++r) p.row(r) = points.row(idx[r]);
    return LabeledDataset(MetricSpace::euclidean(std::move(p)),
                          to_string_labels(labels, idx));
  };
  return {take(ia), take(ib)};
}

std::pair<Eigen::MatrixXd, std::vector<int>> gen_separated_clusters(
    int K, double delta, double eta, int points_per_cluster, int dim,
    std::uint64_t seed) {
  if (K < 1 || points_per_cluster < 1 || dim < 1)
    throw std::invalid_argument("separated clusters: bad sizes");
  if (!(delta > 2.0 * eta) || !(eta > 0.0))
    throw std::invalid_argument("separated clusters require delta > 2*eta > 0");

  const int n = K * points_per_cluster;
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, attempt));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Centers: rejection-sample in a box until mutually >= delta + eta apart.
    const double side = (delta + eta) * std::max(2.0, std::pow(4.0 * K, 1.0 / dim));
    Eigen::MatrixXd centers(K, dim);
    bool placed = true;
    for (int c = 0; c < K && placed; ++c) {
      int tries = 0;
      for (;; ++tries) {
        if (tries > 10000) {
          placed = false;
          break;
        }
        for (int j = 0; j < dim; ++j) centers(c, j) = side * unif(rng);
        bool ok = true;
        for (int o = 0; o < c; ++o)
          if ((centers.row(c) - centers.row(o)).norm() < delta + eta) ok = false;
        if (ok) break;
      }
    }
    if (!placed) continue;

    Eigen::MatrixXd pts(n, dim);
    std::vector<int> labels(n);
    std::vector<std::vector<int>> members(K);
    for (int c = 0; c < K; ++c) {
      for (int t = 0; t < points_per_cluster; ++t) {
        const int i = c * points_per_cluster + t;
        // uniform in the ball of radius eta/2 about the center
        Eigen::VectorXd dir(dim);
        for (int j = 0; j < dim; ++j) dir(j) = gauss(rng);
        dir.normalize();
        const double r = (eta / 2.0) * std::pow(unif(rng), 1.0 / dim);
        pts.row(i) = centers.row(c) + (r * dir).transpose();
        labels[i] = c;
        members[c].push_back(i);
      }
    }

    // Verify the hypothesis on the realized sample, not just the target.
    double max_diam = 0.0;
    for (int c = 0; c < K; ++c)
      for (size_t a = 0; a < members[c].size(); ++a)
        for (size_t b = a + 1; b < members[c].size(); ++b)
          max_diam = std::max(
              max_diam, (pts.row(members[c][a]) - pts.row(members[c][b])).norm());
    double min_hausdorff = std::numeric_limits<double>::infinity();
    for (int c = 0; c < K; ++c)
      for (int o = c + 1; o < K; ++o)
        min_hausdorff = std::min(min_hausdorff, hausdorff(pts, members[c], members[o]));
    if (K == 1 || min_hausdorff > 2.0 * max_diam)
      return {std::move(pts), std::move(labels)};
  }
  throw std::runtime_error(
      "separated clusters: could not realize delta > 2*eta in 10 attempts");
}

}  // namespace mrec
