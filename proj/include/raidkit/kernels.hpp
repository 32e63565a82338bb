#pragma once

// Vector kernels used by every inner loop in the library. Each kernel has a
// scalar reference implementation and, where the CPU allows, an AVX2+FMA
// (x86-64) or NEON (aarch64) variant. The variant is chosen once at startup
// from CPU features; RAIDKIT_ISA=scalar|avx2|neon overrides the choice.
//
// Results differ between variants only by floating-point reassociation; for a
// fixed variant they are bitwise reproducible.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace raidkit::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scal)(double alpha, double* x, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rot)(double* x, double* y, std::size_t n, double c, double s);
};

std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);

bool isa_supported(Isa isa);
std::vector<Isa> supported_isas();

/// Table for a specific variant; throws ContractViolation when unsupported.
const KernelTable& table_for(Isa isa);

/// The table currently in use.
const KernelTable& active();

/// Switch the process-wide variant. Not meant to race with running kernels.
void select(Isa isa);

/// RAII switch, restoring the previous variant on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sumsq(std::span<const double> x) { return active().sumsq(x.data(), x.size()); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scal(double alpha, std::span<double> x) { active().scal(alpha, x.data(), x.size()); }
inline void rot(std::span<double> x, std::span<double> y, double c, double s) {
  active().rot(x.data(), y.data(), x.size(), c, s);
}

}  // namespace raidkit::kernels
