#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

#include "svflow/spd_matrix.hpp"

namespace svflow {

// Seeded random source with a fixed bit-level contract so that streams can be
// reproduced outside this codebase: the engine is std::mt19937_64 (whose output
// sequence is fully specified by the standard), uniform doubles are formed as
// (u64 >> 11) * 2^-53, and normals come from the Box-Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Integer uniform on [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform01() * static_cast<double>(hi - lo + 1));
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Per-trial seed derivation (splitmix64 of base + odd stride * index), so that
// trials are independent streams and parallel execution order cannot matter.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Matrix with i.i.d. standard normal entries, filled row-major.
Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the column
// signs fixed by the diagonal of R.
Eigen::MatrixXd random_orthogonal(Rng& rng, Eigen::Index n);

// Random SPD matrix Q diag(lambda) Q^T with lambda log-uniform in
// [lambda_min, lambda_max]; if unit_norm, the spectrum is rescaled so the top
// eigenvalue is exactly 1.
SpdMatrix random_spd(Rng& rng, Eigen::Index n, double lambda_min,
                     double lambda_max, bool unit_norm = false);

}  // namespace svflow
