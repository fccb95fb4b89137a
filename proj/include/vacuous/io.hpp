#pragma once

// File formats for the command-line tool: one-value-per-line vectors,
// comma-separated matrices, variance specs, and report serialization.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "vacuous/calibration.hpp"
#include "vacuous/geometry.hpp"
#include "vacuous/model.hpp"

namespace vacuous::io {

/// Malformed or mis-shaped input. The message names the file and line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string where(const std::string& path, int line) { return path + ":" + std::to_string(line) + ": "; }

inline double parse_number(std::string_view token, const std::string& path, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw InputError(where(path, line) + "cannot parse number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw InputError(where(path, line) + "non-finite value");
  return value;
}

inline std::vector<std::pair<int, std::string>> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::vector<std::pair<int, std::string>> lines;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (!trim(line).empty()) lines.emplace_back(number, line);
  }
  return lines;
}

}  // namespace detail

/// One value per line; blank lines are ignored.
inline Eigen::VectorXd read_vector(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw InputError(path + ": no values");
  Eigen::VectorXd out(static_cast<Eigen::Index>(lines.size()));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = detail::parse_number(lines[i].second, path, lines[i].first);
  }
  return out;
}

/// Comma-separated rows of equal length.
inline Eigen::MatrixXd read_matrix(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw InputError(path + ": no rows");
  std::vector<std::vector<double>> rows;
  for (const auto& [number, text] : lines) {
    std::vector<double> row;
    std::string_view rest(text);
    for (;;) {
      const auto comma = rest.find(',');
      row.push_back(detail::parse_number(rest.substr(0, comma), path, number));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(detail::where(path, number) + "expected " + std::to_string(rows.front().size()) +
                       " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

/// `known:s2=<float>` or `invchisq:nu=<int>`.
inline VarianceSpec parse_variance(std::string_view text) {
  const auto bad = [&] {
    return InputError("invalid variance spec '" + std::string(text) +
                      "' (expected known:s2=<float> or invchisq:nu=<int>)");
  };
  constexpr std::string_view known = "known:s2=";
  constexpr std::string_view prior = "invchisq:nu=";
  if (text.starts_with(known)) {
    const std::string_view value = text.substr(known.size());
    double s2 = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s2);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(s2) || s2 <= 0.0) {
      throw bad();
    }
    return KnownVariance{s2};
  }
  if (text.starts_with(prior)) {
    const std::string_view value = text.substr(prior.size());
    int nu = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), nu);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() || nu < 1) throw bad();
    return InvChiSquaredPrior{nu};
  }
  throw bad();
}

/// Shortest decimal text that round-trips.
inline std::string format_full(double x) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ptr);
}

inline nlohmann::ordered_json triple_json(const PosteriorTriple& triple) {
  return {{"p", triple.p()}, {"q", triple.q()}, {"r", triple.r()}};
}

/// Aligned key/value text, reals at 4 decimals. Nested objects are
/// flattened to dotted keys.
inline std::string aligned_text(const nlohmann::ordered_json& record) {
  std::vector<std::pair<std::string, nlohmann::ordered_json>> entries;
  const nlohmann::ordered_json flat = record.flatten();
  for (const auto& [pointer, value] : flat.items()) {
    std::string key = pointer.substr(1);
    std::replace(key.begin(), key.end(), '/', '.');
    entries.emplace_back(std::move(key), value);
  }
  std::size_t width = 0;
  for (const auto& entry : entries) width = std::max(width, entry.first.size());
  std::string out;
  char buffer[64];
  for (const auto& [key, value] : entries) {
    out += key + std::string(width + 2 - key.size(), ' ');
    if (value.is_number_integer()) {
      out += value.dump();
    } else if (value.is_number()) {
      std::snprintf(buffer, sizeof buffer, "%.4f", value.get<double>());
      out += buffer;
    } else if (value.is_string()) {
      out += value.get<std::string>();
    } else {
      out += value.dump();
    }
    out += "\n";
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError(path.string() + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw OutputError(path.string() + ": write failed");
}

/// ecdf.csv (r_value,ecdf sorted ascending) and summary.csv
/// (metric,alpha,value) under `directory`.
inline void write_calibration(const CalibrationReport& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw OutputError(directory.string() + ": cannot create output directory");
  }

  std::vector<double> sorted = report.r_values;
  std::sort(sorted.begin(), sorted.end());
  std::string ecdf = "r_value,ecdf\n";
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ecdf += format_full(sorted[i]) + "," + format_full(static_cast<double>(i + 1) / n) + "\n";
  }
  write_text(directory / "ecdf.csv", ecdf);

  std::string summary = "metric,alpha,value\n";
  summary += "ks_uniform,," + format_full(report.ks_uniform) + "\n";
  for (std::size_t i = 0; i < report.config.alphas.size(); ++i) {
    summary += "fwer_bonferroni," + format_full(report.config.alphas[i]) + "," +
               format_full(report.fwer_bonferroni.at(i)) + "\n";
  }
  for (std::size_t i = 0; i < report.config.alphas.size(); ++i) {
    summary += "coverage," + format_full(report.config.alphas[i]) + "," + format_full(report.coverage.at(i)) + "\n";
  }
  write_text(directory / "summary.csv", summary);
}

}  // namespace vacuous::io
