#include "raidkit/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"
#include "raidkit/linalg.hpp"
#include "raidkit/matrix_io.hpp"
#include "raidkit/prng.hpp"

namespace raidkit {
namespace {

struct Point {
  double x, y;
};

std::vector<Point> arc(std::size_t count, double radius, double start, double span,
                       bool midpoints) {
  std::vector<Point> pts(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double offset = midpoints ? static_cast<double>(j) + 0.5 : static_cast<double>(j);
    const double theta = start + offset * span / static_cast<double>(count);
    pts[j] = {radius * std::cos(theta), radius * std::sin(theta)};
  }
  return pts;
}

DenseMatrix log_distances(const std::vector<Point>& rows, const std::vector<Point>& cols) {
  DenseMatrix m(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double d = std::hypot(rows[i].x - cols[j].x, rows[i].y - cols[j].y);
      if (d == 0.0) {
        throw ContractViolation("gen_potential: coincident charges (test " + std::to_string(i) +
                                ", column " + std::to_string(j) + ")");
      }
      m(i, j) = std::log(d);
    }
  }
  return m;
}

void normalize_columns(DenseMatrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = m.col(j);
    const double norm = std::sqrt(kernels::sumsq(c));
    if (norm > 0.0) kernels::scal(1.0 / norm, c);
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void scale_jointly(ExperimentPair& pair) {
  const double s = spectral_norm(pair.b);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw NumericalError("cannot scale pair: ||B||_2 = " + fmt_double(s), s, 0.0);
  }
  pair.a *= 1.0 / s;
  pair.b *= 1.0 / s;
  pair.scale_factor = s;
}

ExperimentPair gen_potential(const ChargeConfig& cfg) {
  if (cfg.n_test == 0 || cfg.n_original == 0 || cfg.n_supervisory == 0) {
    throw ContractViolation("gen_potential: charge counts must be positive");
  }
  if (!(cfg.original_radius > 0.0 && cfg.test_radius > 0.0 && cfg.supervisory_radius > 0.0)) {
    throw ContractViolation("gen_potential: radii must be positive");
  }
  constexpr double pi = std::numbers::pi;
  const auto test = arc(cfg.n_test, cfg.test_radius, 0.0, 2.0 * pi, false);
  const auto original = arc(cfg.n_original, cfg.original_radius, pi / 2, pi / 2, true);
  const auto supervisory = arc(cfg.n_supervisory, cfg.supervisory_radius, pi, pi / 2, true);

  ExperimentPair pair;
  pair.a = log_distances(test, supervisory);
  pair.b = log_distances(test, original);
  scale_jointly(pair);
  pair.provenance = {{"generator", "potential"},
                     {"n_test", std::to_string(cfg.n_test)},
                     {"n_original", std::to_string(cfg.n_original)},
                     {"n_supervisory", std::to_string(cfg.n_supervisory)},
                     {"original_radius", fmt_double(cfg.original_radius)},
                     {"test_radius", fmt_double(cfg.test_radius)},
                     {"supervisory_radius", fmt_double(cfg.supervisory_radius)}};
  return pair;
}

ExperimentPair gen_timeseries(std::size_t m, std::uint64_t seed) {
  if (m < 3) throw ContractViolation("gen_timeseries: m must be at least 3");
  constexpr std::size_t n = 10;
  const CounterRng rng(seed);
  // Normal draw (i, j) has index i * 10 + j (0-based, row-major).
  DenseMatrix c(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double last = rng.normal((m - 1) * n + j);
    for (std::size_t i = 0; i < m; ++i) {
      const double g = j < 5 ? 1e6 * rng.normal(i * n + j) : last;
      c(i, j) = g + 0.01 * static_cast<double>(i + 1) * static_cast<double>(j + 1);
    }
  }
  ExperimentPair pair;
  pair.a = c.row_range(0, m - 1);
  pair.b = c.row_range(1, m - 1);
  scale_jointly(pair);
  pair.provenance = {{"generator", "timeseries"},
                     {"rows", std::to_string(m)},
                     {"seed", std::to_string(seed)},
                     {"prng", "splitmix64-counter/box-muller-cos"}};
  return pair;
}

ExperimentPair make_lagged_pair(const DenseMatrix& c, const LagSpec& spec) {
  const std::size_t m = c.rows();
  if (spec.lag < 1) throw ContractViolation("lag l must be >= 1");
  ExperimentPair pair;
  if (spec.orientation == Orientation::direct) {
    if (spec.lag >= m) {
      throw ContractViolation("lag l = " + std::to_string(spec.lag) +
                              " must be less than the row count " + std::to_string(m));
    }
    DenseMatrix source = c;
    if (spec.normalize == Normalize::source_columns) normalize_columns(source);
    pair.a = source.row_range(0, m - spec.lag);
    pair.b = source.row_range(spec.lag, m - spec.lag);
  } else {
    if (spec.block_rows < 1 || spec.lag + spec.block_rows > m) {
      throw ContractViolation("transposed slicing needs lag + block_rows = " +
                              std::to_string(spec.lag + spec.block_rows) + " <= row count " +
                              std::to_string(m));
    }
    DenseMatrix source = c;
    if (spec.normalize == Normalize::source_columns) normalize_columns(source);
    const std::size_t b0 = m - spec.block_rows;
    pair.a = source.row_range(b0 - spec.lag, spec.lag).transpose();
    pair.b = source.row_range(b0, spec.block_rows).transpose();
  }
  if (spec.normalize == Normalize::pair_columns) {
    normalize_columns(pair.a);
    normalize_columns(pair.b);
  }
  scale_jointly(pair);
  pair.provenance = {
      {"generator", "lagged"},
      {"lag", std::to_string(spec.lag)},
      {"orientation", spec.orientation == Orientation::direct ? "direct" : "transposed"},
      {"normalize", spec.normalize == Normalize::none             ? "none"
                    : spec.normalize == Normalize::source_columns ? "source_columns"
                                                                  : "pair_columns"},
      {"source_shape", shape_string(c)}};
  if (spec.orientation == Orientation::transposed) {
    pair.provenance["block_rows"] = std::to_string(spec.block_rows);
  }
  return pair;
}

void save_pair(const ExperimentPair& pair, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_matrix(dir / "a.radm", pair.a, MatrixFormat::binary);
  save_matrix(dir / "b.radm", pair.b, MatrixFormat::binary);
  nlohmann::ordered_json j;
  j["a_file"] = "a.radm";
  j["b_file"] = "b.radm";
  j["a_shape"] = {pair.a.rows(), pair.a.cols()};
  j["b_shape"] = {pair.b.rows(), pair.b.cols()};
  char hex[64];
  std::snprintf(hex, sizeof hex, "%a", pair.scale_factor);
  j["scale_factor"] = pair.scale_factor;
  j["scale_factor_hex"] = hex;
  j["provenance"] = pair.provenance;
  std::ofstream out(dir / "pair.json", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "pair.json").string());
  out << j.dump(2) << '\n';
}

namespace {

const std::vector<PresetDefaults> kPresets = {
    {Preset::potential, "potential", 10, {}},
    {Preset::timeseries, "timeseries", 4, {}},
    {Preset::electricity, "electricity", 200, {100, 200, 300}},
    {Preset::electricity_t, "electricity-t", 3, {300}},
    {Preset::motion, "motion", 2, {20, 40, 60}},
};

}  // namespace

const std::vector<PresetDefaults>& all_presets() { return kPresets; }

const PresetDefaults& preset_defaults(Preset preset) {
  for (const auto& p : kPresets) {
    if (p.preset == preset) return p;
  }
  throw ContractViolation("unknown preset");
}

Preset parse_preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p.preset;
  }
  throw ContractViolation("unknown preset '" + std::string(name) +
                          "' (expected potential, timeseries, electricity, electricity-t or motion)");
}

}  // namespace raidkit
