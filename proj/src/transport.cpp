#include "mrec/transport.hpp"

#include "mrec/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mrec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_marginal(const Eigen::VectorXd& w, const char* name) {
  if (w.size() == 0) throw std::invalid_argument(std::string(name) + " is empty");
  if (!w.allFinite() || (w.array() <= 0.0).any())
    throw std::invalid_argument(std::string(name) + " must be strictly positive");
  if (std::abs(w.sum() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(name) + " must sum to 1");
}

void check_distance_matrix(const Eigen::MatrixXd& d, const char* name) {
  if (d.rows() != d.cols() || d.rows() == 0)
    throw std::invalid_argument(std::string(name) + " must be square and non-empty");
  if (!d.allFinite())
    throw std::invalid_argument(std::string(name) + " has non-finite entries");
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (std::abs(d(i, i)) > 1e-9)
      throw std::invalid_argument(std::string(name) + " has a nonzero diagonal");
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      if (std::abs(d(i, j) - d(j, i)) > 1e-9)
        throw std::invalid_argument(std::string(name) + " is not symmetric");
      if (d(i, j) < 0.0)
        throw std::invalid_argument(std::string(name) + " has negative entries");
    }
  }
}

Eigen::VectorXd lse_rows(const Eigen::MatrixXd& a) {
  Eigen::VectorXd m = a.rowwise().maxCoeff();
  return m + (a.colwise() - m).array().exp().rowwise().sum().log().matrix();
}

struct CoreResult {
  Eigen::MatrixXd P;
  int iterations = 0;
  bool converged = false;
  double residual = kInf;
};

// Log-stabilized Sinkhorn scaling on an already-normalized cost. The bulk of
// the work is plain matvec scaling against a kernel K formed from the
// absorbed potentials (f, g); whenever a scaling vector threatens the
// floating-point range (or a kernel sum degenerates), the scalings are
// absorbed into (f, g) and the potentials are re-centered by two exact
// log-sum-exp half-iterations. Iterates match textbook log-domain Sinkhorn.
// (f, g) are warm-startable in/out parameters.
struct SinkhornScaler {
  const Eigen::MatrixXd& c;
  const Eigen::VectorXd& mu;
  const Eigen::VectorXd& nu;
  Eigen::VectorXd& f;
  Eigen::VectorXd& g;

  Eigen::ArrayXd log_mu = mu.array().log();
  Eigen::ArrayXd log_nu = nu.array().log();
  Eigen::MatrixXd K{c.rows(), c.cols()};
  Eigen::ArrayXd u = Eigen::ArrayXd::Ones(c.rows());
  Eigen::ArrayXd v = Eigen::ArrayXd::Ones(c.cols());
  Eigen::ArrayXd Kv{c.rows()};
  double eps = 1.0;

  static bool bad(const Eigen::ArrayXd& x) {
    return !x.allFinite() || (x <= 0.0).any();
  }

  // Fold the scalings into the potentials and re-center with two exact
  // log-domain half-updates.
  void absorb() {
    f.array() += eps * u.log();
    g.array() += eps * v.log();
    f = (eps * log_mu).matrix() -
        eps * lse_rows((((-c).rowwise() + g.transpose()) / eps));
    g = (eps * log_nu).matrix() -
        eps * lse_rows(((((-c).colwise() + f) / eps)).transpose());
    K = (((((-c).colwise() + f).rowwise() + g.transpose()) / eps).array().exp())
            .matrix();
    u.setOnes();
    v.setOnes();
    Kv = K.rowwise().sum();
  }

  // Scaling iterations at the current eps until the row residual drops
  // below phase_tol, the budget runs out, or (with stall_horizon > 0) the
  // residual stops improving across that many iterations.
  std::pair<int, double> run_phase(double phase_eps, int budget,
                                   double phase_tol, int stall_horizon) {
    eps = phase_eps;
    absorb();
    double residual = kInf;
    constexpr int kCheck = 50;
    std::vector<double> history;  // residual checkpoints every kCheck iters
    for (int iter = 1; iter <= budget; ++iter) {
      if (bad(Kv)) {
        absorb();
        if (bad(Kv)) return {iter, residual};  // degenerate kernel; give up
      }
      u = mu.array() / Kv;
      Eigen::ArrayXd KTu = (K.transpose() * u.matrix()).array();
      if (bad(KTu)) {
        absorb();
        KTu = K.colwise().sum().transpose().array();
        if (bad(KTu)) return {iter, residual};
      }
      v = nu.array() / KTu;
      Kv = (K * v.matrix()).array();
      if (bad(Kv)) absorb();  // the residual below stays exact either way
      residual = ((u * Kv) - mu.array()).abs().maxCoeff();
      if (residual < phase_tol) return {iter, residual};
      if (iter % kCheck == 0) {
        history.push_back(residual);
        const int lag = stall_horizon / kCheck;
        if (stall_horizon > 0 && static_cast<int>(history.size()) > lag &&
            residual > 0.999 * history[history.size() - 1 - lag])
          return {iter, residual};
      }
      if (std::max(u.abs().log().maxCoeff(), v.abs().log().maxCoeff()) > 150.0)
        absorb();
    }
    return {budget, residual};
  }

  Eigen::MatrixXd coupling() const {
    return u.matrix().asDiagonal() * K * v.matrix().asDiagonal();
  }
};

// Epsilon scaling: anneal from a coarse regularization down to the target,
// reusing the duals, so the slow dual crawl of sharp kernels is skipped.
// `warm` suppresses the ladder when the caller supplies already-good duals.
CoreResult sinkhorn_core(const Eigen::MatrixXd& c, const Eigen::VectorXd& mu,
                         const Eigen::VectorXd& nu, double eps, int max_iter,
                         double tol, Eigen::VectorXd& f, Eigen::VectorXd& g,
                         bool warm = false) {
  SinkhornScaler scaler{c, mu, nu, f, g};
  CoreResult out;

  constexpr double kLadderTop = 0.1;
  constexpr int kLadderBudget = 400;  // per coarse phase
  if (!warm && eps < kLadderTop) {
    double phase_eps = kLadderTop;
    while (phase_eps > eps && out.iterations < max_iter) {
      const auto [used, residual] = scaler.run_phase(
          phase_eps, std::min(kLadderBudget, max_iter - out.iterations),
          std::max(tol, 1e-4), 0);
      out.iterations += used;
      phase_eps = std::max(eps, phase_eps / 10.0);
    }
  }

  const int remaining = max_iter - out.iterations;
  if (remaining > 0) {
    const auto [used, residual] =
        scaler.run_phase(eps, remaining, tol, /*stall_horizon=*/500);
    out.iterations += used;
    out.residual = residual;
    out.converged = residual < tol;
  }
  out.P = scaler.coupling();
  return out;
}

// L(P)[i][j] = sum_{i',j'} |DX(i,i') - DY(j,j')|^p P(i',j').
// p = 2 factorizes into three matrix products; p = 1 has no such split and
// is quartic, fine for the small representative/leaf problems it serves.
Eigen::MatrixXd linearized_cost(const Eigen::MatrixXd& DX,
                                const Eigen::MatrixXd& DY,
                                const Eigen::MatrixXd& P, int p) {
  const Eigen::Index n = DX.rows(), m = DY.rows();
  if (p == 2) {
    const Eigen::VectorXd pr = P.rowwise().sum();
    const Eigen::VectorXd pc = P.colwise().sum().transpose();
    const Eigen::VectorXd hx = DX.cwiseProduct(DX) * pr;
    const Eigen::VectorXd hy = DY.cwiseProduct(DY) * pc;
    Eigen::MatrixXd L = -2.0 * (DX * (P * DY));
    L.colwise() += hx;
    L.rowwise() += hy.transpose();
    return L;
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index ip = 0; ip < n; ++ip)
    for (Eigen::Index jp = 0; jp < m; ++jp) {
      const double w = P(ip, jp);
      if (w == 0.0) continue;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double dx = DX(i, ip);
        for (Eigen::Index j = 0; j < m; ++j)
          L(i, j) += std::abs(dx - DY(j, jp)) * w;
      }
    }
  return L;
}

MatchResult gw_engine(const Eigen::MatrixXd& DX, const Eigen::MatrixXd& DY,
                      const Eigen::MatrixXd* linear, double alpha,
                      const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                      double epsilon, const GwOptions& opts) {
  check_distance_matrix(DX, "DX");
  check_distance_matrix(DY, "DY");
  check_marginal(mu, "mu");
  check_marginal(nu, "nu");
  if (mu.size() != DX.rows() || nu.size() != DY.rows())
    throw std::invalid_argument("marginal sizes do not match distance matrices");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (opts.p != 1 && opts.p != 2)
    throw std::invalid_argument("gw exponent p must be 1 or 2");
  if (linear) {
    if (linear->rows() != DX.rows() || linear->cols() != DY.rows())
      throw std::invalid_argument("linear cost shape does not match the spaces");
    if (!linear->allFinite())
      throw std::invalid_argument("linear cost has non-finite entries");
    if (alpha < 0.0 || alpha > 1.0)
      throw std::invalid_argument("alpha must lie in [0, 1]");
  }

  MatchResult out;
  out.coupling.mu = mu;
  out.coupling.nu = nu;
  Eigen::MatrixXd P = mu * nu.transpose();

  // Fixed scale so epsilon keeps one meaning across outer iterations:
  // entries of L(P) are bounded by max(diam)^p, the linear part by its max.
  const double s_gw = std::pow(std::max(DX.maxCoeff(), DY.maxCoeff()),
                               static_cast<double>(opts.p));
  const double s_lin = linear ? linear->cwiseAbs().maxCoeff() : 0.0;
  const double scale =
      (alpha == 0.0) ? s_gw : (1.0 - alpha) * s_gw + alpha * s_lin;
  if (scale <= 0.0) {
    out.coupling.matrix = P;  // all costs vanish; the product coupling is optimal
    out.converged = true;
    return out;
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(mu.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nu.size());
  const int max_outer = (alpha == 1.0) ? 1 : opts.max_outer;  // constant cost
  for (int outer = 1; outer <= max_outer; ++outer) {
    out.iterations = outer;
    Eigen::MatrixXd cost;
    if (alpha == 0.0) {
      cost = linearized_cost(DX, DY, P, opts.p);
    } else if (alpha == 1.0) {
      cost = *linear;
    } else {
      cost = (1.0 - alpha) * linearized_cost(DX, DY, P, opts.p) + alpha * *linear;
    }
    CoreResult step = sinkhorn_core(cost / scale, mu, nu, epsilon,
                                    opts.max_inner, opts.tol, f, g,
                                    /*warm=*/outer > 1);
    const double delta = (step.P - P).cwiseAbs().maxCoeff();
    P = std::move(step.P);
    if (alpha == 1.0) {
      out.converged = step.converged;
      break;
    }
    if (delta < opts.tol) {
      out.converged = step.converged;  // a truncated inner solve is not converged
      break;
    }
  }

  if (alpha == 1.0) {
    out.cost = P.cwiseProduct(*linear).sum();
  } else {
    const double obj =
        std::max(0.0, linearized_cost(DX, DY, P, opts.p).cwiseProduct(P).sum());
    const double gw_cost = std::pow(obj, 1.0 / opts.p);
    out.cost = (alpha == 0.0)
                   ? gw_cost
                   : (1.0 - alpha) * gw_cost + alpha * P.cwiseProduct(*linear).sum();
  }
  out.coupling.matrix = std::move(P);
  return out;
}

}  // namespace

double Coupling::marginal_residual() const {
  const double r = (matrix.rowwise().sum() - mu).cwiseAbs().maxCoeff();
  const double c = (matrix.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff();
  return std::max(r, c);
}

MatchResult sinkhorn(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                     const Eigen::VectorXd& nu, double epsilon,
                     const SinkhornOptions& opts) {
  if (!cost.allFinite())
    throw std::invalid_argument("sinkhorn: cost has non-finite entries");
  if (cost.rows() == 0 || cost.cols() == 0)
    throw std::invalid_argument("sinkhorn: empty cost matrix");
  check_marginal(mu, "mu");
  check_marginal(nu, "nu");
  if (mu.size() != cost.rows() || nu.size() != cost.cols())
    throw std::invalid_argument("sinkhorn: marginal sizes do not match cost");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");

  const double scale = cost.cwiseAbs().maxCoeff();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(mu.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nu.size());
  CoreResult core =
      sinkhorn_core(scale > 0.0 ? (cost / scale).eval() : cost, mu, nu,
                    epsilon, opts.max_iter, opts.tol, f, g);

  MatchResult out;
  out.cost = core.P.cwiseProduct(cost).sum();
  out.iterations = core.iterations;
  out.converged = core.converged;
  out.coupling = Coupling{std::move(core.P), mu, nu};
  return out;
}

MatchResult entropic_gw(const Eigen::MatrixXd& DX, const Eigen::MatrixXd& DY,
                        const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                        double epsilon, const GwOptions& opts) {
  return gw_engine(DX, DY, nullptr, 0.0, mu, nu, epsilon, opts);
}

MatchResult fused_match(const Eigen::MatrixXd& DX, const Eigen::MatrixXd& DY,
                        const Eigen::MatrixXd& linear_cost, double alpha,
                        const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                        double epsilon, const GwOptions& opts) {
  return gw_engine(DX, DY, &linear_cost, alpha, mu, nu, epsilon, opts);
}

Matching round_to_matching(const Coupling& c, RoundingMode mode) {
  const Eigen::MatrixXd& P = c.matrix;
  const int n = static_cast<int>(P.rows());
  const int m = static_cast<int>(P.cols());
  Matching out;
  out.forward.resize(n);
  out.weights.resize(n);

  const auto argmax_row = [&](int i) {
    int best = 0;
    for (int j = 1; j < m; ++j)
      if (P(i, j) > P(i, best)) best = j;
    return best;
  };

  if (mode == RoundingMode::kArgmax) {
    for (int i = 0; i < n; ++i) out.forward[i] = argmax_row(i);
  } else {
    std::vector<int> sol = max_weight_assignment(P);
    for (int i = 0; i < n; ++i)
      out.forward[i] = sol[i] >= 0 ? sol[i] : argmax_row(i);
  }
  for (int i = 0; i < n; ++i) out.weights[i] = P(i, out.forward[i]);
  return out;
}

double correspondence_distortion(const std::vector<std::pair<int, int>>& R,
                                 const MetricSpace& X, const MetricSpace& Y) {
  double dis = 0.0;
  for (size_t a = 0; a < R.size(); ++a)
    for (size_t b = a + 1; b < R.size(); ++b)
      dis = std::max(dis, std::abs(X.distance(R[a].first, R[b].first) -
                                   Y.distance(R[a].second, R[b].second)));
  return dis;
}

std::pair<double, std::vector<std::pair<int, int>>> brute_force_gh(
    const MetricSpace& X, const MetricSpace& Y) {
  const int n = X.size(), m = Y.size();
  if (n > 5 || m > 5)
    throw std::invalid_argument("brute_force_gh is capped at 5 points per side");
  const Eigen::MatrixXd dX = X.distance_matrix();
  const Eigen::MatrixXd dY = Y.distance_matrix();

  // Every correspondence contains graph(f) u graph(g)^T for a choice of
  // f: X->Y, g: Y->X, and such unions are correspondences, so the infimum of
  // the distortion over correspondences is attained on these pairs.
  std::vector<int> f(n, -1), g(m, -1), best_f, best_g;
  double best = kInf;

  std::function<void(int, double)> search_g = [&](int j, double cur) {
    if (cur >= best) return;
    if (j == m) {
      best = cur;
      best_f = f;
      best_g = g;
      return;
    }
    for (int x = 0; x < n; ++x) {
      double c = cur;
      for (int jp = 0; jp < j && c < best; ++jp)
        c = std::max(c, std::abs(dY(j, jp) - dX(x, g[jp])));
      for (int i = 0; i < n && c < best; ++i)
        c = std::max(c, std::abs(dX(i, x) - dY(f[i], j)));
      if (c < best) {
        g[j] = x;
        search_g(j + 1, c);
        g[j] = -1;
      }
    }
  };
  std::function<void(int, double)> search_f = [&](int i, double cur) {
    if (cur >= best) return;
    if (i == n) {
      search_g(0, cur);
      return;
    }
    for (int y = 0; y < m; ++y) {
      double c = cur;
      for (int ip = 0; ip < i && c < best; ++ip)
        c = std::max(c, std::abs(dX(i, ip) - dY(y, f[ip])));
      if (c < best) {
        f[i] = y;
        search_f(i + 1, c);
        f[i] = -1;
      }
    }
  };
  search_f(0, 0.0);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) pairs.push_back({i, best_f[i]});
  for (int j = 0; j < m; ++j) pairs.push_back({best_g[j], j});
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return {best / 2.0, std::move(pairs)};
}

}  // namespace mrec
