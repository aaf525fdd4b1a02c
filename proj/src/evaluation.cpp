#include "mrec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mrec {

DistortionEstimate matching_distortion(const Matching& m, const MetricSpace& X,
                                       const MetricSpace& Y,
                                       const DistortionOptions& opts) {
  const int n = X.size();
  if (static_cast<int>(m.forward.size()) != n)
    throw std::invalid_argument("matching is not total on X");
  for (const int j : m.forward)
    if (j < 0 || j >= Y.size())
      throw std::invalid_argument("matching target out of range");

  DistortionEstimate out;
  if (n <= opts.exact_cap) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out.value = std::max(out.value,
                             std::abs(X.distance(i, j) -
                                      Y.distance(m.forward[i], m.forward[j])));
    return out;
  }

  out.estimated = true;
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (std::int64_t s = 0; s < opts.samples; ++s) {
    const int i = pick(rng), j = pick(rng);
    out.value = std::max(out.value,
                         std::abs(X.distance(i, j) -
                                  Y.distance(m.forward[i], m.forward[j])));
  }
  return out;
}

double label_accuracy(const Matching& m,
                      const std::vector<std::string>& labels_x,
                      const std::vector<std::string>& labels_y) {
  if (labels_x.empty() || labels_y.empty())
    throw std::invalid_argument("label_accuracy requires labels on both sides");
  if (m.forward.size() != labels_x.size())
    throw std::invalid_argument("matching and X labels disagree in length");
  int hits = 0;
  for (size_t i = 0; i < m.forward.size(); ++i) {
    const int j = m.forward[i];
    if (j < 0 || j >= static_cast<int>(labels_y.size()))
      throw std::invalid_argument("matching target out of label range");
    if (labels_x[i] == labels_y[j]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(m.forward.size());
}

double correspondence_auc(const Matching& m, const std::vector<int>& true_map,
                          const MetricSpace& Y) {
  if (true_map.size() != m.forward.size())
    throw std::invalid_argument("ground-truth map and matching disagree in length");
  const double diam = Y.diameter();
  if (m.forward.empty()) throw std::invalid_argument("empty matching");
  // Each point contributes a unit step at its error e_i; the step curve
  // integrates to sum_i (diam - e_i) / n, and e_i <= diam always.
  double area = 0.0;
  for (size_t i = 0; i < m.forward.size(); ++i) {
    const int t = true_map[i];
    if (t < 0 || t >= Y.size())
      throw std::invalid_argument("ground-truth index out of range");
    const double err = Y.distance(m.forward[i], t);
    area += diam - err;
  }
  if (diam == 0.0) return 1.0;  // all errors are 0 in a one-point geometry
  return area / (diam * static_cast<double>(m.forward.size()));
}

}  // namespace mrec
