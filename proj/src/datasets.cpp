#include "raidkit/datasets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include "raidkit/error.hpp"

namespace raidkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view field, double& out) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc{} && ptr == field.data() + field.size() && std::isfinite(out);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.filename().string() + ":" + std::to_string(line);
}

}  // namespace

DenseMatrix load_electricity(const std::filesystem::path& path, const ElectricityOptions& options) {
  std::ifstream in = open_or_throw(path);
  const std::size_t n = options.expected_columns;
  std::vector<double> values;
  std::string line;
  std::string field;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::size_t fields = 1;
    for (char ch : line) fields += ch == ';';
    if (fields != n + 1) {
      throw DataError(where(path, line_no) + ": expected " + std::to_string(n + 1) +
                      " fields (timestamp and " + std::to_string(n) + " readings), found " +
                      std::to_string(fields));
    }
    std::string_view rest(line);
    rest.remove_prefix(rest.find(';') + 1);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t cut = rest.find(';');
      field.assign(trim(rest.substr(0, cut)));
      for (char& ch : field) {
        if (ch == ',') ch = '.';
      }
      double v = 0.0;
      if (!parse_number(field, v)) {
        throw DataError(where(path, line_no) + ": field " + std::to_string(j + 2) + " '" + field +
                        "' is not a number");
      }
      values.push_back(v);
      if (cut != std::string_view::npos) rest.remove_prefix(cut + 1);
    }
    ++rows;
  }
  if (rows == 0) throw DataError(path.string() + ": no data rows");
  if (options.expected_rows && rows != *options.expected_rows) {
    throw DataError(path.string() + ": expected " + std::to_string(*options.expected_rows) +
                    " rows, found " + std::to_string(rows));
  }
  return DenseMatrix::from_row_major(rows, n, values);
}

DenseMatrix load_motion(const std::vector<std::filesystem::path>& files, const MotionOptions& options) {
  if (files.empty()) throw DataError("load_motion: empty file list");
  const std::size_t n = options.expected_columns;
  std::vector<double> values;
  std::vector<double> row;
  std::size_t rows = 0;
  std::string line;
  for (const auto& path : files) {
    std::ifstream in = open_or_throw(path);
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      row.clear();
      std::string_view rest(line);
      while (true) {
        const std::size_t cut = rest.find(',');
        double v = 0.0;
        if (parse_number(trim(rest.substr(0, cut)), v)) row.push_back(v);
        if (cut == std::string_view::npos) break;
        rest.remove_prefix(cut + 1);
      }
      if (row.empty()) continue;
      if (row.size() != n) {
        throw DataError(where(path, line_no) + ": expected " + std::to_string(n) +
                        " numeric fields, found " + std::to_string(row.size()));
      }
      values.insert(values.end(), row.begin(), row.end());
      ++rows;
    }
  }
  if (rows == 0) throw DataError("load_motion: no numeric rows in the listed files");
  if (options.expected_rows && rows != *options.expected_rows) {
    throw DataError("load_motion: expected shape (" + std::to_string(*options.expected_rows) + ", " +
                    std::to_string(n) + "), got (" + std::to_string(rows) + ", " +
                    std::to_string(n) + ")");
  }
  return DenseMatrix::from_row_major(rows, n, values);
}

std::vector<std::filesystem::path> read_file_list(const std::filesystem::path& list) {
  std::ifstream in = open_or_throw(list);
  std::vector<std::filesystem::path> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    std::filesystem::path p(entry);
    out.push_back(p.is_absolute() ? p : list.parent_path() / p);
  }
  if (out.empty()) throw DataError(list.string() + " lists no files");
  return out;
}

}  // namespace raidkit
