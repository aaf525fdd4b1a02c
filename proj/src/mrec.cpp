#include "mrec/mrec.hpp"

#include "mrec/assignment.hpp"
#include "mrec/seeding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mrec {

namespace {

Eigen::VectorXd uniform_marginal(int n) {
  return Eigen::VectorXd::Constant(n, 1.0 / n);
}

Eigen::MatrixXd cross_cost(const MetricSpace& X, const MetricSpace& Y, int p) {
  if (!X.has_points() || !Y.has_points())
    throw std::invalid_argument(
        "wasserstein matcher needs coordinate backends on both sides");
  if (X.point_dim() != Y.point_dim())
    throw std::invalid_argument(
        "wasserstein matcher needs both spaces in a common coordinate space");
  const double expo = X.minkowski_exponent();
  Eigen::MatrixXd c(X.size(), Y.size());
  for (int i = 0; i < X.size(); ++i) {
    const Eigen::RowVectorXd xi = X.point(i);
    for (int j = 0; j < Y.size(); ++j) {
      const Eigen::ArrayXd d = (xi - Y.point(j)).array().abs();
      const double dist = expo == 2.0 ? std::sqrt(d.square().sum())
                                      : std::pow(d.pow(expo).sum(), 1.0 / expo);
      c(i, j) = p == 1 ? dist : std::pow(dist, static_cast<double>(p));
    }
  }
  return c;
}

Eigen::MatrixXd slice_linear(const Eigen::MatrixXd& full,
                             const std::vector<int>& row_ids,
                             const std::vector<int>& col_ids) {
  Eigen::MatrixXd s(row_ids.size(), col_ids.size());
  for (size_t i = 0; i < row_ids.size(); ++i) {
    if (row_ids[i] < 0 || row_ids[i] >= full.rows())
      throw std::invalid_argument("linear cost rows do not cover the X ids");
    for (size_t j = 0; j < col_ids.size(); ++j) {
      if (col_ids[j] < 0 || col_ids[j] >= full.cols())
        throw std::invalid_argument("linear cost columns do not cover the Y ids");
      s(i, j) = full(row_ids[i], col_ids[j]);
    }
  }
  return s;
}

std::string path_string(const std::vector<int>& path) {
  std::ostringstream os;
  os << "/";
  for (const int b : path) os << b << "/";
  return os.str();
}

struct Driver {
  const MrecParams& params;
  std::vector<int>& forward;
  std::vector<double>& weights;
  RecursionTrace& trace;

  ClusterAssignment cluster(const MetricSpace& s, std::uint64_t seed) const {
    return params.clusterer == ClustererKind::kVoronoi
               ? voronoi_partition(s, params.C, seed)
               : kmeans_partition(s, params.C, seed);
  }

  void run_leaf(const MetricSpace& X, const MetricSpace& Y,
                const std::vector<int>& pos_x, const std::vector<int>& pos_y,
                TraceNode& node) const {
    const MatchResult res =
        match_spaces(X, Y, uniform_marginal(X.size()), uniform_marginal(Y.size()),
                     params.matcher, params.linear_cost);
    const Matching m = round_to_matching(res.coupling, params.matcher.rounding);
    for (int i = 0; i < X.size(); ++i) {
      forward[pos_x[i]] = pos_y[m.forward[i]];
      weights[pos_x[i]] = m.weights[i];
    }
    node.leaf = true;
    node.matcher_cost = res.cost;
    node.matcher_converged = res.converged;
  }

  void solve(const MetricSpace& X, const MetricSpace& Y,
             const std::vector<int>& pos_x, const std::vector<int>& pos_y,
             int depth, const std::vector<int>& path, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    if (depth > params.max_depth)
      throw std::runtime_error("mrec: max_depth exceeded at path " +
                               path_string(path) +
                               " (non-shrinking recursion?)");
    trace.nodes.emplace_back();
    const size_t node_idx = trace.nodes.size() - 1;
    {
      TraceNode& node = trace.nodes[node_idx];
      node.path = path;
      node.depth = depth;
      node.nx = X.size();
      node.ny = Y.size();
    }

    try {
      if (X.size() <= params.T || Y.size() <= params.T) {
        run_leaf(X, Y, pos_x, pos_y, trace.nodes[node_idx]);
        trace.nodes[node_idx].seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return;
      }

      const ClusterAssignment ax = cluster(X, derive_seed(seed, 1));
      const ClusterAssignment ay = cluster(Y, derive_seed(seed, 2));
      if (ax.cluster_count < 2 || ay.cluster_count < 2) {
        // cannot split (e.g. all-duplicate points): match directly
        run_leaf(X, Y, pos_x, pos_y, trace.nodes[node_idx]);
        trace.nodes[node_idx].forced_leaf = true;
        trace.nodes[node_idx].seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return;
      }

      auto [rx_space, mass_x] = representative_space(X, ax);
      auto [ry_space, mass_y] = representative_space(Y, ay);
      const Eigen::VectorXd mu =
          params.mass_weighted
              ? Eigen::Map<const Eigen::VectorXd>(mass_x.data(), mass_x.size()).eval()
              : uniform_marginal(ax.cluster_count);
      const Eigen::VectorXd nu =
          params.mass_weighted
              ? Eigen::Map<const Eigen::VectorXd>(mass_y.data(), mass_y.size()).eval()
              : uniform_marginal(ay.cluster_count);

      const MatchResult res =
          match_spaces(rx_space, ry_space, mu, nu, params.matcher, params.linear_cost);

      // Weak pairs are artifacts of forcing a bijection onto a coupling whose
      // cluster counts disagree structurally (the assignment must route the
      // excess somewhere); a pair carrying a small fraction of its row's best
      // mass is dropped and both clusters are adopted below instead.
      const auto raw_pairs = pair_clusters(res.coupling.matrix);
      std::vector<std::pair<int, int>> pairs;
      for (const auto& [cx, cy] : raw_pairs) {
        const double row_best = res.coupling.matrix.row(cx).maxCoeff();
        if (res.coupling.matrix(cx, cy) >= params.pair_mass_floor * row_best)
          pairs.push_back({cx, cy});
      }
      if (pairs.empty()) {
        // keep the single strongest pair rather than losing the level
        auto best = raw_pairs.front();
        for (const auto& pr : raw_pairs)
          if (res.coupling.matrix(pr.first, pr.second) >
              res.coupling.matrix(best.first, best.second))
            best = pr;
        pairs.push_back(best);
      }
      if (pairs.size() < 2) {
        // a single block cannot shrink the problem
        run_leaf(X, Y, pos_x, pos_y, trace.nodes[node_idx]);
        trace.nodes[node_idx].forced_leaf = true;
        trace.nodes[node_idx].seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return;
      }

      {
        TraceNode& node = trace.nodes[node_idx];
        node.radius_x = cluster_radius(X, ax);
        node.radius_y = cluster_radius(Y, ay);
        node.matcher_cost = res.cost;
        node.matcher_converged = res.converged;
      }

      // Paired base blocks; orphan clusters on the larger side merge into
      // the block of their nearest matched representative.
      std::vector<int> block_of_x(ax.cluster_count, -1);
      std::vector<int> block_of_y(ay.cluster_count, -1);
      for (size_t k = 0; k < pairs.size(); ++k) {
        block_of_x[pairs[k].first] = static_cast<int>(k);
        block_of_y[pairs[k].second] = static_cast<int>(k);
      }
      const auto adopt = [](const MetricSpace& space, const ClusterAssignment& a,
                            std::vector<int>& block_of) {
        std::vector<int> resolved = block_of;
        for (int c = 0; c < a.cluster_count; ++c) {
          if (block_of[c] >= 0) continue;
          int nearest = -1;
          double nearest_d = std::numeric_limits<double>::infinity();
          for (int o = 0; o < a.cluster_count; ++o) {
            if (block_of[o] < 0) continue;  // only originally matched clusters
            const double d =
                space.distance(a.representatives[c], a.representatives[o]);
            if (d < nearest_d) {
              nearest_d = d;
              nearest = o;
            }
          }
          resolved[c] = block_of[nearest];
        }
        block_of = std::move(resolved);
      };
      adopt(X, ax, block_of_x);
      adopt(Y, ay, block_of_y);

      std::vector<std::vector<int>> members_x(pairs.size()), members_y(pairs.size());
      for (int i = 0; i < X.size(); ++i)
        members_x[block_of_x[ax.assignment[i]]].push_back(i);
      for (int j = 0; j < Y.size(); ++j)
        members_y[block_of_y[ay.assignment[j]]].push_back(j);

      trace.nodes[node_idx].seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();

      for (size_t k = 0; k < pairs.size(); ++k) {
        std::vector<int> child_pos_x, child_pos_y;
        child_pos_x.reserve(members_x[k].size());
        child_pos_y.reserve(members_y[k].size());
        for (const int i : members_x[k]) child_pos_x.push_back(pos_x[i]);
        for (const int j : members_y[k]) child_pos_y.push_back(pos_y[j]);
        std::vector<int> child_path = path;
        child_path.push_back(static_cast<int>(k));
        solve(X.restrict_to(members_x[k]), Y.restrict_to(members_y[k]),
              child_pos_x, child_pos_y, depth + 1, child_path,
              derive_seed(seed, 3 + k));
      }
    } catch (const std::runtime_error&) {
      throw;  // already carries a path from deeper in the recursion
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " [at recursion path " +
                               path_string(path) + "]");
    }
  }
};

}  // namespace

MatchResult match_spaces(const MetricSpace& X, const MetricSpace& Y,
                         const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                         const MatcherConfig& cfg,
                         const Eigen::MatrixXd* full_linear_cost) {
  GwOptions gw_opts{cfg.p, cfg.max_outer, cfg.max_inner, cfg.tol};
  switch (cfg.kind) {
    case MatcherKind::kGw:
      return entropic_gw(X.distance_matrix(), Y.distance_matrix(), mu, nu,
                         cfg.epsilon, gw_opts);
    case MatcherKind::kWasserstein: {
      MatchResult r = sinkhorn(cross_cost(X, Y, cfg.p), mu, nu, cfg.epsilon,
                               SinkhornOptions{cfg.max_inner, cfg.tol});
      r.cost = std::pow(std::max(0.0, r.cost), 1.0 / cfg.p);
      return r;
    }
    case MatcherKind::kFused: {
      if (!full_linear_cost)
        throw std::invalid_argument("fused matcher requires a linear cost matrix");
      const Eigen::MatrixXd lin =
          slice_linear(*full_linear_cost, X.point_ids(), Y.point_ids());
      return fused_match(X.distance_matrix(), Y.distance_matrix(), lin,
                         cfg.alpha, mu, nu, cfg.epsilon, gw_opts);
    }
  }
  throw std::logic_error("unknown matcher kind");
}

std::vector<std::pair<int, int>> pair_clusters(const Eigen::MatrixXd& coupling) {
  if (coupling.rows() == 0 || coupling.cols() == 0)
    throw std::invalid_argument("pair_clusters: empty coupling");
  std::vector<std::pair<int, int>> pairs;
  if (coupling.rows() <= coupling.cols()) {
    const std::vector<int> sol = max_weight_assignment(coupling);
    for (int i = 0; i < coupling.rows(); ++i) pairs.push_back({i, sol[i]});
  } else {
    const std::vector<int> sol =
        max_weight_assignment(coupling.transpose().eval());
    for (int j = 0; j < coupling.cols(); ++j) pairs.push_back({sol[j], j});
    std::sort(pairs.begin(), pairs.end());
  }
  return pairs;
}

MrecResult mrec_match(const MetricSpace& X, const MetricSpace& Y,
                      const MrecParams& params) {
  if (X.size() < 1 || Y.size() < 1)
    throw std::invalid_argument("mrec_match: empty input space");
  if (params.C < 2) throw std::invalid_argument("mrec_match: C must be >= 2");
  if (params.T < 1) throw std::invalid_argument("mrec_match: T must be >= 1");
  if (params.max_depth < 1)
    throw std::invalid_argument("mrec_match: max_depth must be >= 1");

  MrecResult out;
  out.matching.forward.assign(X.size(), -1);
  out.matching.weights.assign(X.size(), 0.0);

  std::vector<int> pos_x(X.size()), pos_y(Y.size());
  std::iota(pos_x.begin(), pos_x.end(), 0);
  std::iota(pos_y.begin(), pos_y.end(), 0);

  Driver driver{params, out.matching.forward, out.matching.weights, out.trace};
  driver.solve(X, Y, pos_x, pos_y, 0, {}, params.seed);
  return out;
}

WorkEstimate estimate_work(long long n, const MrecParams& params) {
  if (n < 1) throw std::invalid_argument("estimate_work: n must be >= 1");
  WorkEstimate w;
  if (n <= params.T) {
    w.leaves = 1;
    return w;
  }
  w.depth = static_cast<int>(std::ceil(
      std::log(static_cast<double>(n) / params.T) / std::log(params.C) - 1e-12));
  w.leaves = (n + params.T - 1) / params.T;
  return w;
}

}  // namespace mrec
