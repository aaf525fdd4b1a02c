#include "mrec/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace mrec {

namespace {

constexpr double kSymTol = 1e-9;

double minkowski(const Eigen::MatrixXd& pts, int a, int b, double p) {
  if (p == 2.0) return (pts.row(a) - pts.row(b)).norm();
  if (p == 1.0) return (pts.row(a) - pts.row(b)).cwiseAbs().sum();
  const Eigen::ArrayXd d = (pts.row(a) - pts.row(b)).array().abs();
  return std::pow(d.pow(p).sum(), 1.0 / p);
}

}  // namespace

struct MetricSpace::Backend {
  // Exactly one of the two storage forms is active; `table` doubles as the
  // memo for small point backends.
  Eigen::MatrixXd table;      // full distance matrix (explicit/geodesic/memo)
  Eigen::MatrixXd points;     // coordinates, when available
  double exponent = 2.0;
  bool has_table = false;
  bool has_points = false;

  double dist(int i, int j) const {
    if (has_table) return table(i, j);
    if (i == j) return 0.0;
    return minkowski(points, i, j, exponent);
  }
};

MetricSpace::MetricSpace(std::shared_ptr<const Backend> b,
                         std::vector<int> rows, std::vector<int> ids)
    : backend_(std::move(b)), rows_(std::move(rows)), ids_(std::move(ids)) {}

MetricSpace MetricSpace::euclidean(Eigen::MatrixXd points, double exponent,
                                   int memo_cap) {
  const auto n = points.rows();
  if (n < 1 || points.cols() < 1)
    throw std::invalid_argument("euclidean space needs at least one point and one dimension");
  if (!points.allFinite())
    throw std::invalid_argument("euclidean space: non-finite coordinate");
  if (exponent < 1.0)
    throw std::invalid_argument("minkowski exponent must be >= 1");

  auto b = std::make_shared<Backend>();
  b->points = std::move(points);
  b->exponent = exponent;
  b->has_points = true;
  if (n <= memo_cap) {
    b->table.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      b->table(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double d = minkowski(b->points, static_cast<int>(i),
                                   static_cast<int>(j), exponent);
        b->table(i, j) = d;
        b->table(j, i) = d;
      }
    }
    b->has_table = true;
  }

  std::vector<int> rows(static_cast<size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  return MetricSpace(std::move(b), rows, rows);
}

MetricSpace MetricSpace::from_matrix(Eigen::MatrixXd m) {
  const auto n = m.rows();
  if (n < 1 || m.cols() != n)
    throw std::invalid_argument("distance matrix must be square and non-empty");
  if (!m.allFinite())
    throw std::invalid_argument("distance matrix: non-finite entry");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(m(i, i)) > kSymTol)
      throw std::invalid_argument("distance matrix: nonzero diagonal at row " +
                                  std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > kSymTol)
        throw std::invalid_argument("distance matrix: asymmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      if (m(i, j) < -kSymTol || m(j, i) < -kSymTol)
        throw std::invalid_argument("distance matrix: negative distance at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  auto b = std::make_shared<Backend>();
  b->table = ((m + m.transpose()) / 2.0).cwiseMax(0.0);
  b->table.diagonal().setZero();
  b->has_table = true;

  std::vector<int> rows(static_cast<size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  return MetricSpace(std::move(b), rows, rows);
}

MetricSpace MetricSpace::knn_geodesic(const Eigen::MatrixXd& points, int k) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) throw std::invalid_argument("knn geodesic space needs >= 2 points");
  if (k < 1 || k >= n)
    throw std::invalid_argument("knn geodesic: need 1 <= k < n");
  if (!points.allFinite())
    throw std::invalid_argument("knn geodesic: non-finite coordinate");

  // Union-symmetrized kNN adjacency with Euclidean weights. Neighbor
  // selection sorts on (distance, index) so ties are deterministic.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  {
    std::vector<std::pair<double, int>> cand(n - 1);
    for (int i = 0; i < n; ++i) {
      int c = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cand[c++] = {(points.row(i) - points.row(j)).norm(), j};
      }
      std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
      for (int t = 0; t < k; ++t) {
        adj[i].push_back({cand[t].second, cand[t].first});
        adj[cand[t].second].push_back({i, cand[t].first});
      }
    }
    for (auto& nb : adj) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  // Connectivity check first, so the error can name the component count.
  {
    std::vector<int> comp(n, -1);
    int n_comp = 0;
    for (int s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      ++n_comp;
      std::vector<int> stack{s};
      comp[s] = n_comp;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const auto& [v, w] : adj[u])
          if (comp[v] < 0) {
            comp[v] = n_comp;
            stack.push_back(v);
          }
      }
    }
    if (n_comp > 1)
      throw std::invalid_argument("knn graph is disconnected: " +
                                  std::to_string(n_comp) + " components");
  }

  auto b = std::make_shared<Backend>();
  b->points = points;
  b->has_points = true;
  b->table.setConstant(n, n, std::numeric_limits<double>::infinity());
  // Dijkstra from every source.
  using QItem = std::pair<double, int>;
  for (int s = 0; s < n; ++s) {
    auto row = b->table.row(s);
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    row(s) = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > row(u)) continue;
      for (const auto& [v, w] : adj[u]) {
        const double nd = d + w;
        if (nd < row(v)) {
          row(v) = nd;
          pq.push({nd, v});
        }
      }
    }
  }
  b->table = ((b->table + b->table.transpose()) / 2.0).eval();  // iron out fp drift
  b->has_table = true;

  std::vector<int> rows(static_cast<size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  return MetricSpace(std::move(b), rows, rows);
}

double MetricSpace::distance(int i, int j) const {
  return backend_->dist(rows_[i], rows_[j]);
}

MetricSpace MetricSpace::restrict_to(std::span<const int> indices) const {
  if (indices.empty()) throw std::invalid_argument("restrict_to: empty index list");
  std::vector<int> rows, ids;
  rows.reserve(indices.size());
  ids.reserve(indices.size());
  std::unordered_set<int> seen;
  for (const int idx : indices) {
    if (idx < 0 || idx >= size())
      throw std::invalid_argument("restrict_to: index out of range: " +
                                  std::to_string(idx));
    if (!seen.insert(idx).second)
      throw std::invalid_argument("restrict_to: duplicate index: " +
                                  std::to_string(idx));
    rows.push_back(rows_[idx]);
    ids.push_back(ids_[idx]);
  }
  return MetricSpace(backend_, std::move(rows), std::move(ids));
}

double MetricSpace::diameter() const {
  double best = 0.0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) best = std::max(best, distance(i, j));
  return best;
}

bool MetricSpace::has_points() const { return backend_->has_points; }

int MetricSpace::point_dim() const {
  if (!has_points()) throw std::logic_error("metric space has no coordinate backend");
  return static_cast<int>(backend_->points.cols());
}

Eigen::RowVectorXd MetricSpace::point(int i) const {
  if (!has_points()) throw std::logic_error("metric space has no coordinate backend");
  return backend_->points.row(rows_[i]);
}

double MetricSpace::minkowski_exponent() const { return backend_->exponent; }

Eigen::MatrixXd MetricSpace::distance_matrix() const {
  const int n = size();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double v = distance(i, j);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

LabeledDataset::LabeledDataset(MetricSpace s,
                               std::optional<std::vector<std::string>> l)
    : space(std::move(s)), labels(std::move(l)) {
  if (labels && static_cast<int>(labels->size()) != space.size())
    throw std::invalid_argument("labels length does not match space size");
}

}  // namespace mrec
