#include "mrec/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mrec::io {

namespace {

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

double parse_double(std::string_view tok, const std::string& path, size_t line) {
  tok = trim(tok);
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(path, line, "expected a number, got '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path, bool header) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split_fields(body);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto f : fields) row.push_back(parse_double(f, path, line_no));
    if (width == 0)
      width = row.size();
    else if (row.size() != width)
      fail(path, line_no,
           "expected " + std::to_string(width) + " columns, got " +
               std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  Eigen::MatrixXd m(rows.size(), width);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<std::string> read_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    labels.emplace_back(body);
  }
  if (labels.empty()) throw std::runtime_error(path + ": no labels");
  return labels;
}

std::vector<MatchingRow> read_matching_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<MatchingRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (line_no == 1 && body.substr(0, 4) == "x_id") continue;
    const auto fields = split_fields(body);
    if (fields.size() != 3) fail(path, line_no, "expected x_id,y_id,weight");
    MatchingRow r;
    r.x_id = static_cast<int>(parse_double(fields[0], path, line_no));
    r.y_id = static_cast<int>(parse_double(fields[1], path, line_no));
    r.weight = parse_double(fields[2], path, line_no);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error(path + ": no matching rows");
  return rows;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_labels(const std::string& path, const std::vector<std::string>& labels) {
  std::ofstream out = open_out(path);
  for (const auto& l : labels) out << l << '\n';
}

void write_matching_csv(const std::string& path,
                        const std::vector<MatchingRow>& rows) {
  std::ofstream out = open_out(path);
  out << "x_id,y_id,weight\n";
  for (const auto& r : rows)
    out << r.x_id << ',' << r.y_id << ',' << format_double(r.weight) << '\n';
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace mrec::io
