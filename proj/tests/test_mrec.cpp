#include "mrec/mrec.hpp"

#include "mrec/datagen.hpp"
#include "mrec/evaluation.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace mrec;

namespace {

Eigen::VectorXd uniform(int n) { return Eigen::VectorXd::Constant(n, 1.0 / n); }

MetricSpace random_space(int n, std::uint64_t seed) {
  return MetricSpace::euclidean(oracle::random_points(n, 2, seed));
}

}  // namespace

TEST_CASE("base case equals the direct matcher") {
  const MetricSpace X = random_space(8, 1);
  const MetricSpace Y = random_space(7, 2);
  MrecParams params;
  params.T = 10;
  params.matcher.epsilon = 1e-2;

  const MrecResult rec = mrec_match(X, Y, params);
  const MatchResult direct =
      match_spaces(X, Y, uniform(8), uniform(7), params.matcher);
  const Matching rounded = round_to_matching(direct.coupling, params.matcher.rounding);
  CHECK(rec.matching.forward == rounded.forward);
  CHECK(rec.trace.nodes.size() == 1);
  CHECK(rec.trace.nodes[0].leaf);
}

TEST_CASE("totality and determinism across parameter settings") {
  const MetricSpace X = random_space(60, 3);
  const MetricSpace Y = random_space(55, 4);
  for (const auto clusterer : {ClustererKind::kVoronoi, ClustererKind::kKmeans}) {
    for (const std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      MrecParams params;
      params.C = 4;
      params.T = 6;
      params.seed = seed;
      params.clusterer = clusterer;
      params.matcher.epsilon = 0.05;
      const MrecResult a = mrec_match(X, Y, params);
      REQUIRE(static_cast<int>(a.matching.forward.size()) == X.size());
      for (const int j : a.matching.forward) {
        CHECK(j >= 0);
        CHECK(j < Y.size());
      }
      const MrecResult b = mrec_match(X, Y, params);
      CHECK(a.matching.forward == b.matching.forward);
    }
  }
}

TEST_CASE("well separated clusters map onto themselves") {
  const auto [pts, labels] = gen_separated_clusters(3, 10.0, 1.0, 100, 2, 21);
  const MetricSpace S = MetricSpace::euclidean(pts);
  std::vector<std::string> names;
  for (const int l : labels) names.push_back(std::to_string(l));

  MrecParams params;
  params.C = 3;
  params.T = 10;
  params.clusterer = ClustererKind::kKmeans;
  params.matcher.epsilon = 1e-3;
  const MrecResult res = mrec_match(S, S, params);
  CHECK(label_accuracy(res.matching, names, names) == doctest::Approx(1.0));
}

TEST_CASE("mismatched cluster counts still produce a total matching") {
  const MetricSpace X = random_space(40, 8);
  const MetricSpace Y = random_space(9, 9);  // forces C'_Y < C'_X
  MrecParams params;
  params.C = 12;
  params.T = 3;
  params.matcher.epsilon = 0.05;
  const MrecResult res = mrec_match(X, Y, params);
  for (const int j : res.matching.forward) {
    CHECK(j >= 0);
    CHECK(j < Y.size());
  }
}

TEST_CASE("all duplicate points become a forced leaf") {
  const MetricSpace X = MetricSpace::euclidean(Eigen::MatrixXd::Zero(30, 2));
  const MetricSpace Y = random_space(30, 10);
  MrecParams params;
  params.C = 4;
  params.T = 5;
  const MrecResult res = mrec_match(X, Y, params);
  REQUIRE(res.trace.nodes.size() == 1);
  CHECK(res.trace.nodes[0].forced_leaf);
  for (const int j : res.matching.forward) CHECK(j >= 0);
}

TEST_CASE("max depth exceeded error carries the recursion path") {
  const MetricSpace X = random_space(64, 11);
  const MetricSpace Y = random_space(64, 12);
  MrecParams params;
  params.C = 2;
  params.T = 1;
  params.max_depth = 1;  // cannot finish within one level
  CHECK_THROWS_WITH_AS(mrec_match(X, Y, params),
                       doctest::Contains("max_depth"), std::runtime_error);
}

TEST_CASE("trace structure") {
  const MetricSpace X = random_space(120, 13);
  const MetricSpace Y = random_space(120, 14);
  MrecParams params;
  params.C = 5;
  params.T = 8;
  params.matcher.epsilon = 0.05;
  const MrecResult res = mrec_match(X, Y, params);

  int leaves = 0;
  for (const TraceNode& n : res.trace.nodes) {
    if (n.leaf) {
      ++leaves;
      CHECK((n.nx <= params.T || n.ny <= params.T || n.forced_leaf));
    } else {
      CHECK(n.radius_x > 0.0);
    }
    CHECK(n.depth <= static_cast<int>(n.path.size()));
  }
  CHECK(leaves > 1);
  // preorder: each node's path extends its parent's
  CHECK(res.trace.nodes[0].path.empty());
}

TEST_CASE("pair_clusters examples") {
  Eigen::MatrixXd diag(3, 3);
  diag << 0.5, 0.01, 0.01, 0.01, 0.3, 0.01, 0.01, 0.01, 0.15;
  CHECK(pair_clusters(diag) ==
        std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});

  Eigen::MatrixXd anti(2, 2);
  anti << 0.0, 0.5, 0.5, 0.0;
  CHECK(pair_clusters(anti) == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});

  Eigen::MatrixXd soft(3, 3);
  soft << 0.2, 0.1, 0.03, 0.1, 0.2, 0.03, 0.03, 0.03, 0.28;
  const auto pairs = pair_clusters(soft);
  // the enumeration oracle confirms the identity is the unique maximum (0.68)
  const auto [best, perm] = oracle::max_assignment_enum(soft);
  CHECK(best == doctest::Approx(0.68));
  for (int i = 0; i < 3; ++i) CHECK(pairs[i] == std::pair<int, int>{i, perm[i]});
  CHECK(pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});

  // rectangular: the smaller side is injectively matched
  Eigen::MatrixXd rect(2, 4);
  rect << 0.1, 0.4, 0.1, 0.1, 0.3, 0.05, 0.2, 0.1;
  const auto rp = pair_clusters(rect);
  REQUIRE(rp.size() == 2);
  CHECK(rp[0].second != rp[1].second);

  Eigen::MatrixXd tall = rect.transpose();
  const auto tp = pair_clusters(tall);
  REQUIRE(tp.size() == 2);
  CHECK(tp[0].first != tp[1].first);
}

TEST_CASE("estimate_work") {
  MrecParams params;
  params.C = 10;
  params.T = 10;
  CHECK(estimate_work(1000, params).depth == 2);
  CHECK(estimate_work(5, params).depth == 0);
  CHECK(estimate_work(5, params).leaves == 1);
  params.C = 100;
  CHECK(estimate_work(60000, params).depth == 2);
}

TEST_CASE("depth stays within the logarithmic bound on balanced data") {
  const auto [pts, labels] = gen_separated_clusters(9, 8.0, 1.0, 30, 2, 33);
  const MetricSpace S = MetricSpace::euclidean(pts);  // 270 points
  MrecParams params;
  params.C = 9;
  params.T = 10;
  params.clusterer = ClustererKind::kKmeans;
  params.matcher.epsilon = 0.05;
  const MrecResult res = mrec_match(S, S, params);
  const int bound = static_cast<int>(std::ceil(
                        std::log(S.size() / static_cast<double>(params.T)) /
                        std::log(static_cast<double>(params.C)))) +
                    1;
  for (const TraceNode& n : res.trace.nodes) CHECK(n.depth <= bound);
}

TEST_CASE("derived matching obeys the 4r bound") {
  // one-level recursion against the exact GH correspondence on representatives
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 8 + static_cast<int>(seed % 12);
    const MetricSpace X = random_space(n, 1000 + seed);
    const MetricSpace Y = random_space(n, 2000 + seed);
    const ClusterAssignment ax = voronoi_partition(X, 4, seed);
    const ClusterAssignment ay = voronoi_partition(Y, 4, seed + 1);
    const auto [rx, mx] = representative_space(X, ax);
    const auto [ry, my] = representative_space(Y, ay);
    const auto [gh, rprime] = brute_force_gh(rx, ry);
    const double r = std::max(cluster_radius(X, ax), cluster_radius(Y, ay));

    std::vector<std::pair<int, int>> derived;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::binary_search(rprime.begin(), rprime.end(),
                               std::pair<int, int>{ax.assignment[i], ay.assignment[j]}))
          derived.push_back({i, j});
    const double dis_derived = correspondence_distortion(derived, X, Y);
    const double dis_rep = correspondence_distortion(rprime, rx, ry);
    CHECK(dis_derived < dis_rep + 4.0 * r + 1e-9);
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("matcher selection inside mrec") {
  const MetricSpace X = random_space(30, 41);
  const MetricSpace Y = random_space(30, 42);

  MrecParams wparams;
  wparams.C = 3;
  wparams.T = 5;
  wparams.matcher.kind = MatcherKind::kWasserstein;
  wparams.matcher.epsilon = 0.05;
  const MrecResult wres = mrec_match(X, Y, wparams);
  CHECK(static_cast<int>(wres.matching.forward.size()) == 30);

  // fused needs the full linear cost; absence is an error
  MrecParams fparams = wparams;
  fparams.matcher.kind = MatcherKind::kFused;
  CHECK_THROWS(mrec_match(X, Y, fparams));

  const Eigen::MatrixXd lin = Eigen::MatrixXd::Ones(30, 30);
  fparams.linear_cost = &lin;
  const MrecResult fres = mrec_match(X, Y, fparams);
  CHECK(static_cast<int>(fres.matching.forward.size()) == 30);

  // wasserstein rejects matrix-backed spaces
  const MetricSpace M = MetricSpace::from_matrix(X.distance_matrix());
  CHECK_THROWS(mrec_match(M, Y, wparams));
}

TEST_CASE("parameter validation") {
  const MetricSpace X = random_space(5, 7);
  MrecParams params;
  params.C = 1;
  CHECK_THROWS(mrec_match(X, X, params));
  params.C = 2;
  params.T = 0;
  CHECK_THROWS(mrec_match(X, X, params));
}
