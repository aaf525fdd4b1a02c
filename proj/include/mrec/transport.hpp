#pragma once

#include "mrec/metric_space.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace mrec {

/// A coupling: nonnegative n x m matrix with prescribed marginals mu, nu.
struct Coupling {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd mu;
  Eigen::VectorXd nu;

  /// max over rows/columns of |sum - prescribed marginal|.
  double marginal_residual() const;
};

/// Solver output: the coupling, the transport objective at it (entropy term
/// excluded), and convergence bookkeeping. Non-convergence is reported, not
/// thrown; the surrounding search judges matchings by distortion anyway.
struct MatchResult {
  Coupling coupling;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// A hard matching: every X point is sent to some Y point; weights carry the
/// coupling mass of the selected pair when available.
struct Matching {
  std::vector<int> forward;
  std::vector<double> weights;
};

enum class RoundingMode { kArgmax, kAssignment };

struct SinkhornOptions {
  int max_iter = 1000;
  double tol = 1e-6;
};

struct GwOptions {
  int p = 2;  // distance-difference exponent, 1 or 2
  int max_outer = 50;
  int max_inner = 1000;
  double tol = 1e-6;
};

/// Entropy-regularized optimal transport by log-stabilized Sinkhorn scaling.
/// Costs are normalized by their max absolute entry before the kernel is
/// formed, so epsilon is scale-free. mu and nu must be strictly positive and
/// sum to 1 (within 1e-9); cost must be finite. The reported cost is
/// sum(P .* cost) against the unnormalized cost.
MatchResult sinkhorn(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                     const Eigen::VectorXd& nu, double epsilon,
                     const SinkhornOptions& opts = {});

/// Entropy-regularized Gromov-Wasserstein by alternating linearization:
/// starting from P = mu nu^T, repeatedly build
///   L(P)[i][j] = sum_{i',j'} |DX(i,i') - DY(j,j')|^p P(i',j')
/// and solve a Sinkhorn step on it, until the coupling moves less than tol
/// or max_outer is hit. The returned cost is (sum L(P) .* P)^(1/p), entropy
/// excluded. epsilon is relative to max(max DX, max DY)^p.
MatchResult entropic_gw(const Eigen::MatrixXd& DX, const Eigen::MatrixXd& DY,
                        const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                        double epsilon, const GwOptions& opts = {});

/// Fused variant: the linearized cost is (1-alpha) L(P) + alpha linear_cost.
/// alpha = 0 reduces exactly to entropic_gw, alpha = 1 to
/// sinkhorn(linear_cost). The reported cost blends the GW root-objective and
/// the linear term with the same weights.
MatchResult fused_match(const Eigen::MatrixXd& DX, const Eigen::MatrixXd& DY,
                        const Eigen::MatrixXd& linear_cost, double alpha,
                        const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                        double epsilon, const GwOptions& opts = {});

/// Extract a hard matching from a coupling. Argmax takes each row's best
/// column (ties to the lowest index); assignment solves a maximum-weight
/// bipartite assignment (zero-weight padding for rectangular inputs), which
/// is injective whenever m >= n; rows left unmatched when n > m fall back to
/// their argmax.
Matching round_to_matching(const Coupling& c, RoundingMode mode);

/// Exact Gromov-Hausdorff distance by enumeration over correspondences,
/// realized as unions graph(f) u graph(g)^T over all map pairs
/// f: X -> Y, g: Y -> X with branch-and-bound pruning. Capped at 5 points
/// per side. Returns the distance and one minimizing correspondence.
std::pair<double, std::vector<std::pair<int, int>>> brute_force_gh(
    const MetricSpace& X, const MetricSpace& Y);

/// sup over pairs of a correspondence of |dX(x,x') - dY(y,y')|.
double correspondence_distortion(const std::vector<std::pair<int, int>>& R,
                                 const MetricSpace& X, const MetricSpace& Y);

}  // namespace mrec
