#include "raidkit/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "raidkit/error.hpp"

namespace raidkit {
namespace {

constexpr std::array<char, 4> kMagic{'R', 'A', 'D', 'M'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw DataError("truncated binary matrix header");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

DenseMatrix read_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view field = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw DataError("CSV line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(field) + "' as a number");
      }
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw DataError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                      " fields, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw DataError("CSV input holds no rows");
  try {
    return DenseMatrix::from_row_major(rows, cols, values);
  } catch (const ContractViolation& e) {
    throw DataError(std::string("CSV input: ") + e.what());
  }
}

void write_csv(std::ostream& out, const DenseMatrix& m) {
  std::array<char, 32> buf{};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string line;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) line.push_back(',');
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j));
      line.append(buf.data(), res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

DenseMatrix read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError("not a RADM binary matrix (bad magic bytes)");
  }
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
    throw DataError("binary matrix header claims an implausible size");
  }
  std::vector<double> values(rows * cols);
  std::vector<unsigned char> raw(values.size() * 8);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw DataError("binary matrix truncated: expected " + std::to_string(values.size()) +
                    " values");
  }
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(raw[idx * 8 + b]) << (8 * b);
    values[idx] = std::bit_cast<double>(bits);
  }
  try {
    return DenseMatrix::from_row_major(rows, cols, values);
  } catch (const ContractViolation& e) {
    throw DataError(std::string("binary matrix: ") + e.what());
  }
}

void write_binary(std::ostream& out, const DenseMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  std::vector<char> raw(m.size() * 8);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j, ++idx) {
      const auto bits = std::bit_cast<std::uint64_t>(m(i, j));
      for (int b = 0; b < 8; ++b) raw[idx * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    }
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::csv : MatrixFormat::binary;
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open matrix file " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_binary(in) : read_csv(in);
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write matrix file " + path.string());
  if (format == MatrixFormat::csv) {
    write_csv(out, m);
  } else {
    write_binary(out, m);
  }
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace raidkit
