#include "svflow/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "svflow/errors.hpp"
#include "svflow/parallel.hpp"

namespace svflow {

SpdMatrix gaussian_kernel(const PointCloud& pc, double epsilon) {
  pc.validate();
  if (!(epsilon > 0.0)) {
    throw InvalidInputError("kernel scale epsilon must be positive");
  }
  const Eigen::Index n = pc.count();
  Eigen::MatrixXd k(n, n);
  k.diagonal().setOnes();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> duplicates;
  std::mutex dup_mutex;
  parallel_for(n, [&](std::ptrdiff_t i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (pc.points.row(i) - pc.points.row(j)).squaredNorm();
      if (d2 == 0.0) {
        std::lock_guard<std::mutex> lock(dup_mutex);
        duplicates.emplace_back(i, j);
      }
      const double v = std::exp(-d2 / epsilon);
      k(i, j) = v;
      k(j, i) = v;
    }
  });
  if (!duplicates.empty()) {
    const auto [i, j] = *std::min_element(duplicates.begin(), duplicates.end());
    std::ostringstream msg;
    msg << "kernel is not positive definite: points " << i << " and " << j
        << " coincide, producing eigenvalue 0";
    throw NumericError(msg.str());
  }
  return SpdMatrix(k, EigenvalueFloor::clamp);
}

SpdMatrix normalize_kernel(const SpdMatrix& kernel) {
  const Eigen::MatrixXd& k = kernel.matrix();
  const Eigen::VectorXd row_sums = k.rowwise().sum();
  if ((row_sums.array() <= 0.0).any()) {
    throw NumericError("invalid kernel: non-positive row sum");
  }
  const Eigen::VectorXd inv_sqrt = row_sums.array().rsqrt();
  Eigen::MatrixXd normalized =
      inv_sqrt.asDiagonal() * k * inv_sqrt.asDiagonal();
  return SpdMatrix(normalized, EigenvalueFloor::clamp);
}

double epsilon_heuristic(const PointCloud& pc) {
  pc.validate();
  const Eigen::Index n = pc.count();
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d2.push_back((pc.points.row(i) - pc.points.row(j)).squaredNorm());
    }
  }
  std::sort(d2.begin(), d2.end());
  const std::size_t m = d2.size();
  const double median =
      m % 2 == 1 ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
  if (!(median > 0.0)) {
    throw InvalidInputError(
        "degenerate point cloud: median pairwise distance is zero");
  }
  return median;
}

}  // namespace svflow
