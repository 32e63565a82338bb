#pragma once

// Loaders for the electricity-load and gesture-phase datasets. The files are
// not shipped; see README for download locations.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "raidkit/matrix.hpp"

namespace raidkit {

struct ElectricityOptions {
  std::size_t expected_columns = 370;          // numeric fields after the timestamp
  std::optional<std::size_t> expected_rows;    // 140256 for the full export
};

/// Semicolon-delimited export with a header line, a leading timestamp field
/// and decimal commas.
DenseMatrix load_electricity(const std::filesystem::path& path, const ElectricityOptions& options = {});

struct MotionOptions {
  std::size_t expected_columns = 50;
  std::optional<std::size_t> expected_rows;  // 1743 for the session used in the presets
};

/// Concatenates the rows of comma-separated files in the given order. Fields
/// that do not parse as numbers (labels, header names) are dropped; lines with
/// no numeric field are skipped.
DenseMatrix load_motion(const std::vector<std::filesystem::path>& files, const MotionOptions& options = {});

/// Reads a file list, one path per line, relative to the list's directory.
/// Blank lines and lines starting with '#' are ignored.
std::vector<std::filesystem::path> read_file_list(const std::filesystem::path& list);

}  // namespace raidkit
