#include "mrec/search.hpp"

#include "mrec/seeding.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace mrec {

namespace {

void parallel_for(int n_tasks, int workers,
                  const std::function<void(int)>& fn) {
  if (workers <= 1 || n_tasks <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int n_threads = std::min(workers, n_tasks);
  pool.reserve(n_threads);
  for (int w = 0; w < n_threads; ++w)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

SweepGrid SweepGrid::defaults() {
  SweepGrid g;
  g.epsilon_values = {10.0, 1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  g.C_values = {10, 100, 1000};
  g.matchers = {MatcherConfig{}};
  return g;
}

SweepResult sweep(const MetricSpace& X, const MetricSpace& Y,
                  const MrecParams& base, const SweepGrid& grid,
                  const std::optional<std::vector<std::string>>& labels_x,
                  const std::optional<std::vector<std::string>>& labels_y,
                  int workers, const DistortionOptions& dist_opts) {
  if (grid.epsilon_values.empty() || grid.C_values.empty() || grid.matchers.empty())
    throw std::invalid_argument("sweep grid must be non-empty");
  if (grid.runs_per_cell < 1)
    throw std::invalid_argument("sweep needs runs_per_cell >= 1");
  const bool with_labels = labels_x.has_value() && labels_y.has_value();

  SweepResult out;
  const int n_cells = static_cast<int>(grid.matchers.size()) *
                      static_cast<int>(grid.epsilon_values.size()) *
                      static_cast<int>(grid.C_values.size()) * grid.runs_per_cell;
  out.table.resize(n_cells);
  std::vector<Matching> matchings(n_cells);

  int idx = 0;
  for (size_t mi = 0; mi < grid.matchers.size(); ++mi)
    for (const double eps : grid.epsilon_values)
      for (const int C : grid.C_values)
        for (int run = 0; run < grid.runs_per_cell; ++run) {
          SweepCell& cell = out.table[idx];
          cell.matcher_index = static_cast<int>(mi);
          cell.epsilon = eps;
          cell.C = C;
          cell.run = run;
          cell.seed = derive_seed(grid.base_seed, idx);
          ++idx;
        }

  parallel_for(n_cells, workers, [&](int i) {
    SweepCell& cell = out.table[i];
    try {
      MrecParams params = base;
      params.C = cell.C;
      params.seed = cell.seed;
      params.matcher = grid.matchers[cell.matcher_index];
      params.matcher.epsilon = cell.epsilon;

      const auto t0 = std::chrono::steady_clock::now();
      MrecResult res = mrec_match(X, Y, params);
      cell.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      cell.matcher_converged =
          std::all_of(res.trace.nodes.begin(), res.trace.nodes.end(),
                      [](const TraceNode& n) { return n.matcher_converged; });

      DistortionOptions dopts = dist_opts;
      dopts.seed = derive_seed(cell.seed, 0x5eed);
      const DistortionEstimate dist =
          matching_distortion(res.matching, X, Y, dopts);
      cell.distortion = dist.value;
      cell.distortion_estimated = dist.estimated;
      if (with_labels)
        cell.accuracy = label_accuracy(res.matching, *labels_x, *labels_y);
      matchings[i] = std::move(res.matching);
    } catch (const std::exception& e) {
      cell.failed = true;
      cell.error = e.what();
      cell.distortion = std::numeric_limits<double>::quiet_NaN();
    }
  });

  for (int i = 0; i < n_cells; ++i) {
    const SweepCell& cell = out.table[i];
    if (cell.failed) continue;
    if (out.best_index < 0 ||
        cell.distortion < out.table[out.best_index].distortion)
      out.best_index = i;
  }
  if (out.best_index >= 0) {
    const SweepCell& best = out.table[out.best_index];
    out.best_matching = std::move(matchings[out.best_index]);
    out.best_report.distortion = best.distortion;
    out.best_report.distortion_estimated = best.distortion_estimated;
    out.best_report.accuracy = best.accuracy;
    out.best_report.runtime_seconds = best.runtime_seconds;
  }
  return out;
}

std::vector<CurveRow> curve_export(const std::vector<SweepCell>& table) {
  if (table.empty()) throw std::invalid_argument("curve_export: empty table");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // group cells by (C, matcher, epsilon)
  std::map<int, std::map<std::pair<int, double>, std::vector<const SweepCell*>>> by_c;
  for (const SweepCell& cell : table)
    by_c[cell.C][{cell.matcher_index, cell.epsilon}].push_back(&cell);

  const auto mean_var = [&](const std::vector<double>& xs) {
    if (xs.empty()) return std::make_pair(nan, nan);
    double m = 0.0;
    for (const double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (const double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size());
    return std::make_pair(m, v);
  };

  std::vector<CurveRow> rows;
  for (const auto& [c_value, groups] : by_c) {
    // pick the (matcher, epsilon) group with the lowest mean distortion
    const std::vector<const SweepCell*>* best_group = nullptr;
    double best_mean = std::numeric_limits<double>::infinity();
    for (const auto& [key, cells] : groups) {
      std::vector<double> ds;
      for (const auto* cell : cells)
        if (!cell->failed) ds.push_back(cell->distortion);
      if (ds.empty()) continue;
      const auto [m, v] = mean_var(ds);
      if (m < best_mean) {
        best_mean = m;
        best_group = &cells;
      }
    }
    CurveRow row;
    row.C = c_value;
    if (!best_group) {
      row.mean_distortion = row.var_distortion = nan;
      row.mean_accuracy = row.var_accuracy = nan;
      row.mean_runtime_seconds = nan;
    } else {
      std::vector<double> ds, as, ts;
      for (const auto* cell : *best_group) {
        if (cell->failed) continue;
        ds.push_back(cell->distortion);
        ts.push_back(cell->runtime_seconds);
        if (cell->accuracy) as.push_back(*cell->accuracy);
      }
      std::tie(row.mean_distortion, row.var_distortion) = mean_var(ds);
      std::tie(row.mean_accuracy, row.var_accuracy) = mean_var(as);
      row.mean_runtime_seconds = mean_var(ts).first;
    }
    rows.push_back(row);
  }
  return rows;  // std::map iteration gives ascending C
}

}  // namespace mrec
