#include "mrec/metric_space.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace mrec;

TEST_CASE("euclidean distances") {
  Eigen::MatrixXd one_d(2, 1);
  one_d << 0.0, 3.0;
  CHECK(MetricSpace::euclidean(one_d).distance(0, 1) == doctest::Approx(3.0));

  Eigen::MatrixXd two_d(2, 2);
  two_d << 0.0, 0.0, 3.0, 4.0;
  CHECK(MetricSpace::euclidean(two_d).distance(0, 1) == doctest::Approx(5.0));

  // taxicab norm of the same pair
  CHECK(MetricSpace::euclidean(two_d, 1.0).distance(0, 1) == doctest::Approx(7.0));
}

TEST_CASE("euclidean rejects bad input") {
  Eigen::MatrixXd p(1, 2);
  p << 1.0, std::nan("");
  CHECK_THROWS(MetricSpace::euclidean(p));
  CHECK_THROWS(MetricSpace::euclidean(Eigen::MatrixXd(0, 2)));
  Eigen::MatrixXd q(2, 1);
  q << 0.0, 1.0;
  CHECK_THROWS(MetricSpace::euclidean(q, 0.5));
}

TEST_CASE("triangle inequality on random euclidean points") {
  const MetricSpace s = MetricSpace::euclidean(oracle::random_points(10, 3, 7));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k)
        CHECK(s.distance(i, k) <= s.distance(i, j) + s.distance(j, k) + 1e-9);
}

TEST_CASE("memoized and on-demand euclidean agree") {
  const Eigen::MatrixXd pts = oracle::random_points(20, 2, 11);
  const MetricSpace cached = MetricSpace::euclidean(pts, 2.0, 4096);
  const MetricSpace lazy = MetricSpace::euclidean(pts, 2.0, 0);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      CHECK(cached.distance(i, j) == doctest::Approx(lazy.distance(i, j)).epsilon(1e-15));
}

TEST_CASE("explicit matrix validation") {
  Eigen::MatrixXd good(2, 2);
  good << 0.0, 1.0, 1.0, 0.0;
  const MetricSpace s = MetricSpace::from_matrix(good);
  CHECK(s.size() == 2);
  CHECK(s.distance(0, 1) == 1.0);

  Eigen::MatrixXd asym(2, 2);
  asym << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_WITH_AS(MetricSpace::from_matrix(asym),
                       doctest::Contains("asymmetric"), std::invalid_argument);

  Eigen::MatrixXd neg(2, 2);
  neg << 0.0, -1.0, -1.0, 0.0;
  CHECK_THROWS_WITH_AS(MetricSpace::from_matrix(neg),
                       doctest::Contains("negative"), std::invalid_argument);

  Eigen::MatrixXd diag(2, 2);
  diag << 0.5, 1.0, 1.0, 0.0;
  CHECK_THROWS(MetricSpace::from_matrix(diag));
}

TEST_CASE("geodesic chain") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 1.0, 2.0, 3.0;
  const MetricSpace s = MetricSpace::knn_geodesic(pts, 1);
  CHECK(s.distance(0, 3) == doctest::Approx(3.0));
  CHECK(s.distance(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("geodesic circle vs brute-force relaxation") {
  const int n = 16;
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    pts(i, 0) = std::cos(t);
    pts(i, 1) = std::sin(t);
  }
  const MetricSpace s = MetricSpace::knn_geodesic(pts, 2);

  // independent APSP over the cycle's edge list
  std::vector<std::tuple<int, int, double>> edges;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    edges.push_back({i, j, (pts.row(i) - pts.row(j)).norm()});
  }
  const Eigen::MatrixXd ref = oracle::apsp_relaxation(n, edges);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(s.distance(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-12));

  // antipodal geodesic exceeds the chord and approximates half the perimeter
  const double chord = (pts.row(0) - pts.row(8)).norm();
  CHECK(s.distance(0, 8) > chord);
  CHECK(s.distance(0, 8) == doctest::Approx(8.0 * (pts.row(0) - pts.row(1)).norm()));
}

TEST_CASE("geodesic >= euclidean") {
  const Eigen::MatrixXd pts = oracle::random_points(30, 2, 3);
  const MetricSpace geo = MetricSpace::knn_geodesic(pts, 4);
  const MetricSpace euc = MetricSpace::euclidean(pts);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      CHECK(geo.distance(i, j) >= euc.distance(i, j) - 1e-9);
}

TEST_CASE("geodesic disconnected error names component count") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 1.0, 100.0, 101.0;
  CHECK_THROWS_WITH_AS(MetricSpace::knn_geodesic(pts, 1),
                       doctest::Contains("2 components"), std::invalid_argument);
}

TEST_CASE("restriction") {
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 2, 1, 0, 1.5, 2, 1.5, 0;
  const MetricSpace s = MetricSpace::from_matrix(m);

  const std::vector<int> idx{0, 2};
  const MetricSpace r = s.restrict_to(idx);
  CHECK(r.size() == 2);
  CHECK(r.distance(0, 1) == 2.0);
  CHECK(r.point_id(0) == 0);
  CHECK(r.point_id(1) == 2);

  const std::vector<int> all{0, 1, 2};
  const MetricSpace copy = s.restrict_to(all);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(copy.distance(i, j) == s.distance(i, j));

  const std::vector<int> dup{0, 0};
  CHECK_THROWS(s.restrict_to(dup));
  const std::vector<int> oob{0, 5};
  CHECK_THROWS(s.restrict_to(oob));
}

TEST_CASE("nested restriction equals composed restriction") {
  const MetricSpace s = MetricSpace::euclidean(oracle::random_points(12, 3, 5));
  const std::vector<int> first{1, 3, 4, 7, 9, 11};
  const std::vector<int> second{0, 2, 5};
  const MetricSpace nested = s.restrict_to(first).restrict_to(second);
  std::vector<int> composed;
  for (const int i : second) composed.push_back(first[i]);
  const MetricSpace direct = s.restrict_to(composed);
  REQUIRE(nested.size() == direct.size());
  for (int i = 0; i < nested.size(); ++i) {
    CHECK(nested.point_id(i) == direct.point_id(i));
    for (int j = 0; j < nested.size(); ++j)
      CHECK(nested.distance(i, j) == direct.distance(i, j));
  }
}

TEST_CASE("diameter") {
  Eigen::MatrixXd single(1, 1);
  single << 0.0;
  CHECK(MetricSpace::euclidean(single).diameter() == 0.0);

  Eigen::MatrixXd two(2, 2);
  two << 0, 1, 1, 0;
  CHECK(MetricSpace::from_matrix(two).diameter() == 1.0);

  Eigen::MatrixXd square(4, 2);
  square << 0, 0, 1, 0, 0, 1, 1, 1;
  CHECK(MetricSpace::euclidean(square).diameter() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("labeled dataset length check") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 1.0;
  CHECK_THROWS(LabeledDataset(MetricSpace::euclidean(pts),
                              std::vector<std::string>{"a"}));
  const LabeledDataset ok(MetricSpace::euclidean(pts),
                          std::vector<std::string>{"a", "b"});
  CHECK(ok.labels->size() == 2);
}
