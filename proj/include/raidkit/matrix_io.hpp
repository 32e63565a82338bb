#pragma once

// Matrix files.
//
// CSV: one matrix row per line, comma separated, '.' decimal point, no header.
// Values are written in shortest round-trip form, so write+read is exact.
//
// Binary (.radm): the 4 bytes "RADM", rows as little-endian u64, cols as
// little-endian u64, then rows*cols IEEE-754 binary64 values, little-endian,
// row-major.

#include <filesystem>
#include <iosfwd>

#include "raidkit/matrix.hpp"

namespace raidkit {

enum class MatrixFormat { csv, binary };

DenseMatrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_binary(std::istream& in);
void write_binary(std::ostream& out, const DenseMatrix& m);

/// Picks the format from the file's leading magic bytes.
DenseMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format);
/// ".csv" -> csv, anything else -> binary.
MatrixFormat format_for_path(const std::filesystem::path& path);

}  // namespace raidkit
