#include <cstdlib>
#include <ostream>

#include "raidkit/datasets.hpp"
#include "raidkit/error.hpp"
#include "raidkit/report.hpp"

namespace raidkit {
namespace {

constexpr const char* kElectricityFile = "LD2011_2014.txt";
constexpr const char* kMotionList = "motion_files.txt";
constexpr const char* kElectricityUrl =
    "https://archive.ics.uci.edu/ml/machine-learning-databases/00321/LD2011_2014.txt.zip";
constexpr const char* kMotionUrl =
    "https://archive.ics.uci.edu/ml/machine-learning-databases/00302/gesture_phase_dataset.zip";

std::filesystem::path require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::exists(path)) {
    throw DataError(std::string(what) + " not found at " + path.string() +
                    " (set --data-dir or RAIDKIT_DATA_DIR, or pass --download)");
  }
  return path;
}

std::vector<std::size_t> lags_for(const RunConfig& config, const PresetDefaults& defaults) {
  return config.lags.empty() ? defaults.lags : config.lags;
}

}  // namespace

std::filesystem::path resolve_data_dir(const RunConfig& config) {
  if (config.data_dir) return *config.data_dir;
  if (const char* env = std::getenv("RAIDKIT_DATA_DIR"); env && *env) return env;
  return "data";
}

std::vector<LabeledPair> preset_pairs(const RunConfig& config) {
  const Preset preset = parse_preset(*config.preset);
  const PresetDefaults& defaults = preset_defaults(preset);
  std::vector<LabeledPair> out;
  switch (preset) {
    case Preset::potential:
      out.push_back({std::nullopt, gen_potential()});
      break;
    case Preset::timeseries:
      out.push_back({std::nullopt, gen_timeseries(config.rows, config.seed)});
      break;
    case Preset::electricity:
    case Preset::electricity_t: {
      const auto path = require_file(resolve_data_dir(config) / kElectricityFile, "electricity data");
      const DenseMatrix c = load_electricity(path);
      for (std::size_t lag : lags_for(config, defaults)) {
        LagSpec spec;
        spec.lag = lag;
        if (preset == Preset::electricity) {
          spec.normalize = Normalize::source_columns;
        } else {
          spec.orientation = Orientation::transposed;
        }
        out.push_back({lag, make_lagged_pair(c, spec)});
        out.back().pair.provenance["dataset"] = kElectricityFile;
      }
      break;
    }
    case Preset::motion: {
      const auto list = require_file(resolve_data_dir(config) / kMotionList, "motion file list");
      MotionOptions options;
      options.expected_rows = 1743;
      const DenseMatrix c = load_motion(read_file_list(list), options);
      for (std::size_t lag : lags_for(config, defaults)) {
        LagSpec spec;
        spec.lag = lag;
        spec.normalize = Normalize::pair_columns;
        out.push_back({lag, make_lagged_pair(c, spec)});
        out.back().pair.provenance["dataset"] = kMotionList;
      }
      break;
    }
  }
  return out;
}

void download_datasets(const std::filesystem::path& data_dir, std::ostream& err) {
  std::filesystem::create_directories(data_dir);
  for (const char* url : {kElectricityUrl, kMotionUrl}) {
    const std::string name = std::filesystem::path(url).filename().string();
    const auto zip = data_dir / name;
    err << "downloading " << url << '\n';
    const std::string fetch = "curl -fL --retry 2 -o '" + zip.string() + "' '" + url + "'";
    if (std::system(fetch.c_str()) != 0) {
      throw DataError("download failed: " + std::string(url) + " (fetch it manually into " +
                      data_dir.string() + ")");
    }
    const std::string unpack = "unzip -o -q '" + zip.string() + "' -d '" + data_dir.string() + "'";
    if (std::system(unpack.c_str()) != 0) throw DataError("could not unzip " + zip.string());
  }
  err << "motion data unpacked; list the session files in " << (data_dir / kMotionList).string()
      << '\n';
}

}  // namespace raidkit
