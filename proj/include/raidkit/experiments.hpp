#pragma once

// Generators and slicing for the numerical experiments, plus the presets that
// pin their parameters.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "raidkit/matrix.hpp"

namespace raidkit {

struct ChargeConfig {
  std::size_t n_test = 80;
  std::size_t n_original = 20;
  std::size_t n_supervisory = 20;
  double original_radius = 0.9;
  double test_radius = 1.0;
  double supervisory_radius = 1.1;
};

enum class Normalize {
  none,
  source_columns,  // unit columns of C before slicing
  pair_columns,    // unit columns of A and of B after slicing
};

enum class Orientation { direct, transposed };

struct LagSpec {
  std::size_t lag = 1;
  Normalize normalize = Normalize::none;
  Orientation orientation = Orientation::direct;
  // transposed: B is the transpose of the last block_rows rows of C and A the
  // transpose of the lag rows just before them.
  std::size_t block_rows = 100000;
};

struct ExperimentPair {
  DenseMatrix a;
  DenseMatrix b;
  double scale_factor = 1.0;  // ||B||_2 before division
  std::map<std::string, std::string> provenance;
};

/// Log-distance potentials between charges on three concentric arcs.
ExperimentPair gen_potential(const ChargeConfig& cfg = {});

/// Lag-one pair from an m x 10 series built on CounterRng normals.
ExperimentPair gen_timeseries(std::size_t m, std::uint64_t seed);

ExperimentPair make_lagged_pair(const DenseMatrix& c, const LagSpec& spec);

/// Divides both by ||B||_2 and records the factor.
void scale_jointly(ExperimentPair& pair);

/// Writes a.radm, b.radm and pair.json into dir.
void save_pair(const ExperimentPair& pair, const std::filesystem::path& dir);

enum class Preset { potential, timeseries, electricity, electricity_t, motion };

struct PresetDefaults {
  Preset preset;
  std::string_view name;
  std::size_t k;
  std::vector<std::size_t> lags;  // empty when the preset has no lag
};

const PresetDefaults& preset_defaults(Preset preset);
Preset parse_preset(std::string_view name);
const std::vector<PresetDefaults>& all_presets();

constexpr std::size_t kDefaultTimeseriesRows = 100001;

}  // namespace raidkit
