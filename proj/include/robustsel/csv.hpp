// Copyright 2026 The robustsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROBUSTSEL_CSV_HPP_
#define ROBUSTSEL_CSV_HPP_

#include <Eigen/Dense>

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "robustsel/errors.hpp"

namespace robustsel {

// Numeric output format used for every emitted file.
inline std::string format_number(double v) { return fmt::format("{:.12g}", v); }

struct DenseData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> header;  // empty when the file had none
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

// Comma-separated reals, optional header row, last column is the target.
inline DenseData parse_dense_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  DenseData out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_commas(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (std::string_view f : fields) {
      const auto v = detail::parse_double(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && out.header.empty()) {
        for (std::string_view f : fields) out.header.emplace_back(detail::trim(f));
        width = fields.size();
        continue;
      }
      throw ConfigError("non-numeric field on CSV line " + std::to_string(line_no));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) throw ConfigError("inconsistent column count on CSV line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("CSV contains no data rows");
  if (width < 2) throw ConfigError("CSV needs at least one feature column and a target column");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(width - 1);
  out.X.resize(n, d);
  out.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    out.y[i] = rows[static_cast<std::size_t>(i)].back();
  }
  return out;
}

inline DenseData read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file " + path);
  return parse_dense_csv(in);
}

inline void write_dense_csv(std::ostream& os, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) os << "x" << j << ",";
  os << "target\n";
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) os << format_number(X(i, j)) << ",";
    os << format_number(y[i]) << "\n";
  }
}

}  // namespace robustsel

#endif  // ROBUSTSEL_CSV_HPP_
