#include "svflow/rng.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace svflow {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the argument of log strictly positive.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 step.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.normal();
    }
  }
  return m;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, Eigen::Index n) {
  const Eigen::MatrixXd gaussian = random_matrix(rng, n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  return q;
}

SpdMatrix random_spd(Rng& rng, Eigen::Index n, double lambda_min,
                     double lambda_max, bool unit_norm) {
  Eigen::VectorXd lambdas(n);
  const double lo = std::log(lambda_min);
  const double hi = std::log(lambda_max);
  for (Eigen::Index k = 0; k < n; ++k) {
    lambdas(k) = std::exp(rng.uniform(lo, hi));
  }
  std::sort(lambdas.data(), lambdas.data() + n, std::greater<double>());
  if (unit_norm) lambdas /= lambdas(0);
  return SpdMatrix::from_decomposition(random_orthogonal(rng, n), lambdas);
}

}  // namespace svflow
