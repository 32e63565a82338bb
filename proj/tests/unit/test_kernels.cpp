#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"

namespace rk = raidkit::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

// Lengths cover empty input, sub-vector tails and multi-block bodies.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 1023, 4099};

}  // namespace

TEST(Kernels, ScalarAlwaysSupported) {
  EXPECT_TRUE(rk::isa_supported(rk::Isa::scalar));
  EXPECT_EQ(rk::supported_isas().front(), rk::Isa::scalar);
}

TEST(Kernels, ParseIsaRoundTrip) {
  for (auto isa : {rk::Isa::scalar, rk::Isa::avx2, rk::Isa::neon}) {
    EXPECT_EQ(rk::parse_isa(rk::isa_name(isa)), isa);
  }
  EXPECT_THROW(rk::parse_isa("sse9"), raidkit::ContractViolation);
}

TEST(Kernels, ScopedIsaRestoresPrevious) {
  const rk::Isa before = rk::active().isa;
  {
    rk::ScopedIsa guard(rk::Isa::scalar);
    EXPECT_EQ(rk::active().isa, rk::Isa::scalar);
  }
  EXPECT_EQ(rk::active().isa, before);
}

TEST(Kernels, UnsupportedIsaRejected) {
  for (auto isa : {rk::Isa::avx2, rk::Isa::neon}) {
    if (!rk::isa_supported(isa)) EXPECT_THROW(rk::select(isa), raidkit::ContractViolation);
  }
}

TEST(Kernels, VariantsMatchScalar) {
  const auto& ref = rk::table_for(rk::Isa::scalar);
  std::mt19937_64 rng(7);
  for (rk::Isa isa : rk::supported_isas()) {
    const auto& t = rk::table_for(isa);
    SCOPED_TRACE(std::string(rk::isa_name(isa)));
    for (std::size_t n : kLengths) {
      SCOPED_TRACE(n);
      const auto x = random_vector(n, rng);
      const auto y = random_vector(n, rng);
      double abs_dot = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        abs_dot += std::abs(x[i] * y[i]);
        sq += x[i] * x[i];
      }
      const double eps = 1e-16 * static_cast<double>(n + 1) * 4;
      EXPECT_NEAR(t.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n), eps * abs_dot + 1e-300);
      EXPECT_NEAR(t.sumsq(x.data(), n), ref.sumsq(x.data(), n), eps * sq + 1e-300);

      auto y1 = y, y2 = y;
      t.axpy(0.37, x.data(), y1.data(), n);
      ref.axpy(0.37, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 4e-16 * (std::abs(y[i]) + std::abs(x[i])));

      auto s1 = x, s2 = x;
      t.scal(-1.75, s1.data(), n);
      ref.scal(-1.75, s2.data(), n);
      EXPECT_EQ(s1, s2);  // single rounding either way

      auto rx1 = x, ry1 = y, rx2 = x, ry2 = y;
      const double c = std::cos(0.3), s = std::sin(0.3);
      t.rot(rx1.data(), ry1.data(), n, c, s);
      ref.rot(rx2.data(), ry2.data(), n, c, s);
      for (std::size_t i = 0; i < n; ++i) {
        const double scale = std::abs(x[i]) + std::abs(y[i]);
        EXPECT_NEAR(rx1[i], rx2[i], 4e-16 * scale);
        EXPECT_NEAR(ry1[i], ry2[i], 4e-16 * scale);
      }
    }
  }
}

TEST(Kernels, ScalarDotExactOnIntegers) {
  std::vector<double> x(1000), y(1000);
  double expect = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i % 17) - 8.0;
    y[i] = static_cast<double>(i % 5) + 1.0;
    expect += x[i] * y[i];
  }
  for (rk::Isa isa : rk::supported_isas()) {
    EXPECT_EQ(rk::table_for(isa).dot(x.data(), y.data(), x.size()), expect);
  }
}
