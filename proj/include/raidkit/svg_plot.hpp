#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "raidkit/matrix.hpp"

namespace raidkit {

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Values at or below this are drawn at it on the log axis.
constexpr double kLogFloor = 1e-17;

/// Singular values on a log10 axis, one marker series per spectrum.
std::string render_svplot(const std::vector<Series>& spectra, const std::string& title = "");
void emit_svplot(const std::vector<Series>& spectra, const std::filesystem::path& path,
                 const std::string& title = "");

/// Scores (rows, n x 2) as black dots and loadings (p x 2) as gray lines from
/// the origin, on equal-aspect axes.
std::string render_biplot(const DenseMatrix& scores, const DenseMatrix& loadings,
                          const std::string& title = "");
void emit_biplot(const DenseMatrix& scores, const DenseMatrix& loadings,
                 const std::filesystem::path& path, const std::string& title = "");

}  // namespace raidkit
