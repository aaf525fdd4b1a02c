#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mrec::io {

/// Comma-separated decimal floats, one row per point; `header` skips the
/// first line. Parse errors name the 1-based line number.
Eigen::MatrixXd read_csv_matrix(const std::string& path, bool header = false);

/// One label token per line, aligned with point rows.
std::vector<std::string> read_labels(const std::string& path);

/// Rows of `x_id,y_id,weight` with a header line.
struct MatchingRow {
  int x_id = 0;
  int y_id = 0;
  double weight = 0.0;
};
std::vector<MatchingRow> read_matching_csv(const std::string& path);

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);
void write_labels(const std::string& path, const std::vector<std::string>& labels);
void write_matching_csv(const std::string& path,
                        const std::vector<MatchingRow>& rows);

/// Fixed 17-significant-digit decimal form used by every CSV we emit, so
/// outputs are byte-reproducible and round-trip exactly.
std::string format_double(double v);

}  // namespace mrec::io
