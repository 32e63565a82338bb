#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "raidkit/datasets.hpp"
#include "raidkit/error.hpp"
#include "raidkit/experiments.hpp"
#include "raidkit/linalg.hpp"
#include "raidkit/matrix_io.hpp"
#include "raidkit/prng.hpp"
#include "test_support.hpp"

using raidkit::DenseMatrix;
namespace rt = raidkit::testing;

namespace {
const std::filesystem::path kFixtures = RAIDKIT_TEST_FIXTURES;
}

TEST(CounterRng, MatchesSplitMix64Sequence) {
  const raidkit::CounterRng rng(0);
  EXPECT_EQ(rng.bits(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.bits(1), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.bits(2), 0x06c45d188009454fULL);
}

TEST(CounterRng, UniformsInUnitIntervalAndNormalsPlausible) {
  const raidkit::CounterRng rng(12345);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(i);
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    const double g = rng.normal(i);
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(GenPotential, ShapesScaleAndEntryFormula) {
  const auto pair = raidkit::gen_potential();
  ASSERT_EQ(pair.a.rows(), 80u);
  ASSERT_EQ(pair.a.cols(), 20u);
  ASSERT_EQ(pair.b.rows(), 80u);
  ASSERT_EQ(pair.b.cols(), 20u);
  EXPECT_NEAR(rt::eigen_norm2(pair.b), 1.0, 1e-12);

  const double theta0 = std::numbers::pi / 2 + 0.5 * (std::numbers::pi / 2) / 20;
  const double expect = std::log(std::hypot(1.0 - 0.9 * std::cos(theta0), 0.0 - 0.9 * std::sin(theta0)));
  EXPECT_NEAR(pair.b(0, 0), expect / pair.scale_factor, 1e-15);

  const double phi = std::numbers::pi + 2.5 * (std::numbers::pi / 2) / 20;
  const double ti = 2 * std::numbers::pi * 7 / 80;
  const double ea = std::log(std::hypot(std::cos(ti) - 1.1 * std::cos(phi), std::sin(ti) - 1.1 * std::sin(phi)));
  EXPECT_NEAR(pair.a(7, 2), ea / pair.scale_factor, 1e-15);
}

TEST(GenPotential, RecomputationIsIdentical) {
  EXPECT_EQ(raidkit::gen_potential().b, raidkit::gen_potential().b);
  EXPECT_EQ(raidkit::gen_potential().a, raidkit::gen_potential().a);
}

TEST(GenPotential, RejectsBadConfigs) {
  raidkit::ChargeConfig cfg;
  cfg.n_original = 0;
  EXPECT_THROW(raidkit::gen_potential(cfg), raidkit::ContractViolation);
  raidkit::ChargeConfig neg;
  neg.test_radius = -1.0;
  EXPECT_THROW(raidkit::gen_potential(neg), raidkit::ContractViolation);
  // Test charge 3 of 8 sits at 3 pi / 4, the single original charge's midpoint.
  raidkit::ChargeConfig clash;
  clash.n_test = 8;
  clash.n_original = 1;
  clash.original_radius = 1.0;
  EXPECT_THROW(raidkit::gen_potential(clash), raidkit::ContractViolation);
}

TEST(GenTimeseries, ConstructionOracle) {
  const std::size_t m = 50;
  const auto pair = raidkit::gen_timeseries(m, 9);
  ASSERT_EQ(pair.a.rows(), m - 1);
  ASSERT_EQ(pair.b.cols(), 10u);
  EXPECT_NEAR(rt::eigen_norm2(pair.b), 1.0, 1e-12);
  const raidkit::CounterRng rng(9);
  const double s = pair.scale_factor;
  // Entry (m, 10), 1-based, before scaling: the constant-column draw plus 0.1 m.
  const double g = rng.normal((m - 1) * 10 + 9);
  EXPECT_NEAR(pair.b(m - 2, 9) * s, g + 0.1 * m, 1e-12 * std::abs(g + 0.1 * m));
  // Entry (3, 2): scaled draw plus 0.01 * 3 * 2.
  EXPECT_NEAR(pair.a(2, 1) * s, 1e6 * rng.normal(2 * 10 + 1) + 0.06, 1e-9);
  // Columns 6-10 differ between rows only by the linear term.
  for (std::size_t j = 5; j < 10; ++j) {
    const double step = 0.01 * static_cast<double>(j + 1);
    EXPECT_NEAR((pair.a(10, j) - pair.a(9, j)) * s, step, 1e-9);
  }
  // B is A shifted by one row.
  for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(pair.a(5, j), pair.b(4, j));
}

TEST(GenTimeseries, BitReproducibleAndSeedSensitive) {
  const auto p1 = raidkit::gen_timeseries(1000, 3);
  const auto p2 = raidkit::gen_timeseries(1000, 3);
  EXPECT_EQ(p1.a, p2.a);
  EXPECT_EQ(p1.b, p2.b);
  EXPECT_NE(raidkit::gen_timeseries(1000, 4).b, p1.b);
  EXPECT_THROW(raidkit::gen_timeseries(2, 0), raidkit::ContractViolation);
}

TEST(MakeLaggedPair, DirectSlicing) {
  const DenseMatrix c{{1, 2}, {3, 4}, {5, 7}};
  raidkit::LagSpec spec;
  spec.lag = 1;
  const auto pair = raidkit::make_lagged_pair(c, spec);
  const double s = pair.scale_factor;
  EXPECT_EQ(pair.a.rows(), 2u);
  EXPECT_DOUBLE_EQ(pair.a(0, 0) * s, 1.0);
  EXPECT_DOUBLE_EQ(pair.a(1, 1) * s, 4.0);
  EXPECT_DOUBLE_EQ(pair.b(0, 0) * s, 3.0);
  EXPECT_DOUBLE_EQ(pair.b(1, 1) * s, 7.0);
  EXPECT_NEAR(rt::eigen_norm2(pair.b), 1.0, 1e-12);
  spec.lag = 3;
  EXPECT_THROW(raidkit::make_lagged_pair(c, spec), raidkit::ContractViolation);
  spec.lag = 0;
  EXPECT_THROW(raidkit::make_lagged_pair(c, spec), raidkit::ContractViolation);
}

TEST(MakeLaggedPair, NormalizationModes) {
  std::mt19937_64 rng(70);
  DenseMatrix c = rt::gaussian(30, 4, rng);
  for (std::size_t i = 0; i < 30; ++i) c(i, 3) = 0.0;  // zero column stays zero
  raidkit::LagSpec spec;
  spec.lag = 5;
  spec.normalize = raidkit::Normalize::pair_columns;
  const auto pair = raidkit::make_lagged_pair(c, spec);
  for (std::size_t j = 0; j < 3; ++j) {
    double na = 0, nb = 0;
    for (std::size_t i = 0; i < pair.a.rows(); ++i) na += std::pow(pair.a(i, j) * pair.scale_factor, 2);
    for (std::size_t i = 0; i < pair.b.rows(); ++i) nb += std::pow(pair.b(i, j) * pair.scale_factor, 2);
    EXPECT_NEAR(std::sqrt(na), 1.0, 1e-12);
    EXPECT_NEAR(std::sqrt(nb), 1.0, 1e-12);
  }
  EXPECT_EQ(pair.b(0, 3), 0.0);

  spec.normalize = raidkit::Normalize::source_columns;
  const auto src = raidkit::make_lagged_pair(c, spec);
  double full = 0;
  for (std::size_t i = 0; i < 25; ++i) full += std::pow(src.a(i, 0) * src.scale_factor, 2);
  for (std::size_t i = 25; i < 30; ++i) full += std::pow(src.b(i - 5, 0) * src.scale_factor, 2);
  EXPECT_NEAR(full, 1.0, 1e-12);
}

TEST(MakeLaggedPair, TransposedSlicing) {
  std::mt19937_64 rng(71);
  const DenseMatrix c = rt::gaussian(20, 3, rng);
  raidkit::LagSpec spec;
  spec.lag = 4;
  spec.orientation = raidkit::Orientation::transposed;
  spec.block_rows = 10;
  const auto pair = raidkit::make_lagged_pair(c, spec);
  ASSERT_EQ(pair.a.rows(), 3u);
  ASSERT_EQ(pair.a.cols(), 4u);
  ASSERT_EQ(pair.b.cols(), 10u);
  EXPECT_DOUBLE_EQ(pair.b(1, 0) * pair.scale_factor, c(10, 1));
  EXPECT_DOUBLE_EQ(pair.a(2, 3) * pair.scale_factor, c(9, 2));
  spec.block_rows = 17;
  EXPECT_THROW(raidkit::make_lagged_pair(c, spec), raidkit::ContractViolation);
}

TEST(SavePair, WritesMatricesAndProvenance) {
  const auto dir = std::filesystem::temp_directory_path() / "raidkit_pair_test";
  std::filesystem::remove_all(dir);
  const auto pair = raidkit::gen_timeseries(20, 1);
  raidkit::save_pair(pair, dir);
  EXPECT_EQ(raidkit::load_matrix(dir / "a.radm"), pair.a);
  EXPECT_EQ(raidkit::load_matrix(dir / "b.radm"), pair.b);
  std::ifstream in(dir / "pair.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["provenance"]["generator"], "timeseries");
  EXPECT_EQ(j["provenance"]["seed"], "1");
  std::filesystem::remove_all(dir);
}

TEST(Presets, TableMatchesExperiments) {
  EXPECT_EQ(raidkit::preset_defaults(raidkit::Preset::potential).k, 10u);
  EXPECT_EQ(raidkit::preset_defaults(raidkit::Preset::timeseries).k, 4u);
  EXPECT_EQ(raidkit::preset_defaults(raidkit::Preset::electricity).k, 200u);
  EXPECT_EQ(raidkit::preset_defaults(raidkit::Preset::electricity_t).k, 3u);
  EXPECT_EQ(raidkit::preset_defaults(raidkit::Preset::motion).k, 2u);
  EXPECT_EQ(raidkit::preset_defaults(raidkit::Preset::motion).lags, (std::vector<std::size_t>{20, 40, 60}));
  EXPECT_EQ(raidkit::parse_preset("electricity-t"), raidkit::Preset::electricity_t);
  EXPECT_THROW(raidkit::parse_preset("weather"), raidkit::ContractViolation);
}

TEST(LoadElectricity, ParsesDecimalCommas) {
  raidkit::ElectricityOptions opt;
  opt.expected_columns = 2;
  const DenseMatrix m = raidkit::load_electricity(kFixtures / "electricity_small.txt", opt);
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(0, 0), 1.5);
  EXPECT_EQ(m(0, 1), 2.0);
  EXPECT_EQ(m(1, 1), 3.25);
}

TEST(LoadElectricity, ErrorsNameLineAndFieldCount) {
  try {
    raidkit::load_electricity(kFixtures / "electricity_wrong_count.txt");
    FAIL();
  } catch (const raidkit::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("expected 371 fields"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  raidkit::ElectricityOptions opt;
  opt.expected_columns = 2;
  try {
    raidkit::load_electricity(kFixtures / "electricity_malformed.txt", opt);
    FAIL();
  } catch (const raidkit::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("electricity_malformed.txt:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(raidkit::load_electricity(kFixtures / "absent.txt"), raidkit::DataError);
}

TEST(LoadMotion, ConcatenatesListedFiles) {
  const auto files = raidkit::read_file_list(kFixtures / "motion_files.txt");
  ASSERT_EQ(files.size(), 2u);
  const DenseMatrix two = raidkit::load_motion({files[0]});
  EXPECT_EQ(two.rows(), 2u);
  EXPECT_EQ(two.cols(), 50u);
  EXPECT_EQ(two(1, 1), 1.01);
  const DenseMatrix all = raidkit::load_motion(files);
  EXPECT_EQ(all.rows(), 3u);
  EXPECT_TRUE(all.all_finite());
  EXPECT_EQ(all(2, 49), -4.9);
}

TEST(LoadMotion, ShapeErrorsReportAchievedShape) {
  raidkit::MotionOptions opt;
  opt.expected_rows = 1743;
  try {
    raidkit::load_motion({kFixtures / "motion_a.csv"}, opt);
    FAIL();
  } catch (const raidkit::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("got (2, 50)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(raidkit::load_motion({kFixtures / "motion_short.csv"}), raidkit::DataError);
}
