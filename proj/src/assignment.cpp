#include "mrec/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace mrec {

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("assignment matrix must be square");
  if (!cost.allFinite()) throw std::invalid_argument("assignment matrix must be finite");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based potentials; p[j] = row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight) {
  const int n = static_cast<int>(weight.rows());
  const int m = static_cast<int>(weight.cols());
  const int N = std::max(n, m);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(N, N);
  cost.topLeftCorner(n, m) = -weight;
  std::vector<int> sol = min_cost_assignment(cost);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = sol[i] < m ? sol[i] : -1;
  return out;
}

}  // namespace mrec
