#include "mrec/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mrec {

namespace {

void validate(const MetricSpace& space, const ClusterAssignment& a) {
  if (static_cast<int>(a.assignment.size()) != space.size())
    throw std::invalid_argument("cluster assignment does not match space size");
  for (const int c : a.assignment)
    if (c < 0 || c >= a.cluster_count)
      throw std::invalid_argument("cluster assignment out of range");
}

void fill_masses(ClusterAssignment& a) {
  a.masses.assign(a.cluster_count, 0);
  for (const int c : a.assignment) ++a.masses[c];
}

}  // namespace

double ClusterAssignment::balance_ratio() const {
  const auto [lo, hi] = std::minmax_element(masses.begin(), masses.end());
  return static_cast<double>(*hi) / static_cast<double>(*lo);
}

ClusterAssignment voronoi_partition(const MetricSpace& space, int C,
                                    std::uint64_t seed) {
  const int n = space.size();
  if (C < 1) throw std::invalid_argument("voronoi_partition: C must be >= 1");
  const int k = std::min(C, n);

  // Partial Fisher-Yates draw of k distinct germ indices, then sort so
  // cluster order (and the tie rule) is independent of draw order.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<int> sampled(perm.begin(), perm.begin() + k);
  std::sort(sampled.begin(), sampled.end());

  // Coincident germs collapse into the earliest one, so C' <= min(C, n) on
  // inputs with duplicate points (an all-duplicate space yields C' = 1).
  std::vector<int> germs;
  for (const int g : sampled) {
    bool dup = false;
    for (const int kept : germs)
      if (space.distance(g, kept) == 0.0) dup = true;
    if (!dup) germs.push_back(g);
  }
  const int kept = static_cast<int>(germs.size());

  ClusterAssignment out;
  out.cluster_count = kept;
  out.representatives = germs;
  out.assignment.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestd = space.distance(i, germs[0]);
    for (int c = 1; c < kept; ++c) {
      const double d = space.distance(i, germs[c]);
      if (d < bestd) {
        bestd = d;
        best = c;
      }
    }
    out.assignment[i] = best;
  }
  fill_masses(out);
  return out;
}

ClusterAssignment kmeans_partition(const MetricSpace& space, int C,
                                   std::uint64_t seed, int max_iter) {
  if (!space.has_points())
    throw std::invalid_argument("kmeans_partition requires a coordinate backend");
  const int n = space.size();
  if (C < 1) throw std::invalid_argument("kmeans_partition: C must be >= 1");
  const int k = std::min(C, n);
  const int d = space.point_dim();

  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) pts.row(i) = space.point(i);

  std::mt19937_64 rng(seed);

  // k-means++ seeding on squared Euclidean distances.
  Eigen::MatrixXd centroids(k, d);
  {
    std::uniform_int_distribution<int> first(0, n - 1);
    centroids.row(0) = pts.row(first(rng));
    Eigen::VectorXd d2 = (pts.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double total = d2.sum();
      int chosen;
      if (total <= 0.0) {
        // all remaining points coincide with a centroid; pick uniformly
        std::uniform_int_distribution<int> any(0, n - 1);
        chosen = any(rng);
      } else {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng), acc = 0.0;
        chosen = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += d2(i);
          if (acc >= target) {
            chosen = i;
            break;
          }
        }
      }
      centroids.row(c) = pts.row(chosen);
      d2 = d2.cwiseMin((pts.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
  }

  std::vector<int> assign(n, -1);
  auto assign_pass = [&]() {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = assign[i];
      double bestd = best >= 0
                         ? (pts.row(i) - centroids.row(best)).squaredNorm()
                         : std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dd = (pts.row(i) - centroids.row(c)).squaredNorm();
        if (dd < bestd) {  // ties keep the current cluster
          bestd = dd;
          best = c;
        }
      }
      if (best != assign[i]) {
        assign[i] = best;
        changed = true;
      }
    }
    return changed;
  };

  assign_pass();  // initial assignment from the seeded centroids
  for (int it = 0; it < max_iter; ++it) {
    // centroid update
    centroids.setZero();
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      centroids.row(assign[i]) += pts.row(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) /= counts[c];
      }
    }
    // repair empty clusters: steal the point farthest from its centroid
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int worst = -1;
      double worstd = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[assign[i]] <= 1) continue;  // keep donors non-empty
        const double dd = (pts.row(i) - centroids.row(assign[i])).squaredNorm();
        if (dd > worstd) {
          worstd = dd;
          worst = i;
        }
      }
      --counts[assign[worst]];
      assign[worst] = c;
      counts[c] = 1;
      centroids.row(c) = pts.row(worst);
    }
    if (!assign_pass()) break;  // fixpoint
  }

  ClusterAssignment out;
  out.cluster_count = k;
  out.assignment = std::move(assign);
  fill_masses(out);

  // medoid snap: member nearest its centroid, lowest index on ties
  out.representatives.assign(k, -1);
  std::vector<double> repd(k, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    const int c = out.assignment[i];
    const double dd = (pts.row(i) - centroids.row(c)).squaredNorm();
    if (dd < repd[c]) {
      repd[c] = dd;
      out.representatives[c] = i;
    }
  }
  return out;
}

double cluster_radius(const MetricSpace& space, const ClusterAssignment& a) {
  validate(space, a);
  std::vector<std::vector<int>> members(a.cluster_count);
  for (int i = 0; i < space.size(); ++i) members[a.assignment[i]].push_back(i);
  double r = 0.0;
  for (const auto& m : members)
    for (size_t s = 0; s < m.size(); ++s)
      for (size_t t = s + 1; t < m.size(); ++t)
        r = std::max(r, space.distance(m[s], m[t]));
  return r;
}

std::pair<MetricSpace, std::vector<double>> representative_space(
    const MetricSpace& space, const ClusterAssignment& a) {
  validate(space, a);
  std::vector<double> masses(a.cluster_count);
  for (int c = 0; c < a.cluster_count; ++c)
    masses[c] = static_cast<double>(a.masses[c]) / space.size();
  return {space.restrict_to(a.representatives), std::move(masses)};
}

}  // namespace mrec
