#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "svflow/errors.hpp"
#include "svflow/kernel.hpp"
#include "svflow/rng.hpp"

using namespace svflow;

namespace {

PointCloud random_cloud(Rng& rng, int n, int d) {
  PointCloud pc{Eigen::MatrixXd(n, d)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) pc.points(i, j) = rng.uniform01();
  }
  return pc;
}

}  // namespace

TEST_CASE("gaussian kernel matches the pairwise formula exactly") {
  Rng rng(51);
  const PointCloud pc = random_cloud(rng, 5, 3);
  const double epsilon = 0.7;
  const SpdMatrix k = gaussian_kernel(pc, epsilon);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double d2 = (pc.points.row(i) - pc.points.row(j)).squaredNorm();
      CHECK(k.matrix()(i, j) == std::exp(-d2 / epsilon));
    }
    CHECK(k.matrix()(i, i) == 1.0);
  }
  CHECK(k.matrix().minCoeff() > 0.0);
  CHECK(k.matrix().maxCoeff() <= 1.0);
}

TEST_CASE("gaussian kernel entry at squared distance epsilon is 1/e") {
  PointCloud pc{Eigen::MatrixXd(2, 1)};
  pc.points << 0.0, 2.0;  // squared distance 4
  const SpdMatrix k = gaussian_kernel(pc, 4.0);
  CHECK(k.matrix()(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("coincident points are rejected with a singularity report") {
  PointCloud pc{Eigen::MatrixXd(3, 2)};
  pc.points << 0.0, 0.0, 1.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_WITH_AS(gaussian_kernel(pc, 1.0),
                       doctest::Contains("eigenvalue 0"), NumericError);
}

TEST_CASE("gaussian kernel rejects bad epsilon") {
  Rng rng(52);
  const PointCloud pc = random_cloud(rng, 4, 2);
  CHECK_THROWS_AS(gaussian_kernel(pc, 0.0), InvalidInputError);
  CHECK_THROWS_AS(gaussian_kernel(pc, -1.0), InvalidInputError);
}

TEST_CASE("normalize_kernel keeps the identity fixed") {
  const SpdMatrix identity(Eigen::MatrixXd::Identity(4, 4));
  const SpdMatrix out = normalize_kernel(identity);
  CHECK((out.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-14);
}

TEST_CASE("normalize_kernel on the all-ones kernel gives J/4") {
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(4, 4);
  const SpdMatrix k(ones, EigenvalueFloor::clamp);
  const SpdMatrix out = normalize_kernel(k);
  CHECK((out.matrix().array() - 0.25).abs().maxCoeff() <= 1e-14);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::VectorXd lead = out.decomposition().eigenvectors.col(0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(std::abs(lead(i)) - 0.5) <= 1e-12);
  }
}

TEST_CASE("normalized kernels have unit norm and a positive Perron vector") {
  Rng rng(53);
  const PointCloud pc = random_cloud(rng, 50, 3);
  const SpdMatrix raw = gaussian_kernel(pc, epsilon_heuristic(pc));
  const SpdMatrix out = normalize_kernel(raw);
  CHECK(std::abs(operator_norm(out.matrix()) - 1.0) <= 1e-12);
  CHECK(std::abs(out.norm() - 1.0) <= 1e-12);

  // Leading eigenvector is proportional to D^{1/2} * ones, componentwise
  // positive once the global sign is fixed.
  Eigen::VectorXd expected =
      raw.matrix().rowwise().sum().array().sqrt().matrix().normalized();
  Eigen::VectorXd lead = out.decomposition().eigenvectors.col(0);
  if (lead(0) < 0.0) lead = -lead;
  CHECK((lead - expected).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(lead.minCoeff() > 0.0);
}

TEST_CASE("renormalizing is stable only for uniform row sums") {
  // Uniform row sums: renormalization changes nothing measurable.
  Eigen::MatrixXd circulant(3, 3);
  circulant << 1.0, 0.25, 0.25, 0.25, 1.0, 0.25, 0.25, 0.25, 1.0;
  const SpdMatrix k(circulant);
  const SpdMatrix once = normalize_kernel(k);
  const SpdMatrix twice = normalize_kernel(once);
  CHECK(std::abs(operator_norm(once.matrix()) - operator_norm(twice.matrix())) <=
        1e-12);
}

TEST_CASE("epsilon heuristic on tiny configurations") {
  PointCloud two{Eigen::MatrixXd(2, 1)};
  two.points << 0.0, 2.0;
  CHECK(epsilon_heuristic(two) == 4.0);

  PointCloud collinear{Eigen::MatrixXd(3, 1)};
  collinear.points << 0.0, 1.0, 3.0;
  CHECK(epsilon_heuristic(collinear) == 4.0);
}

TEST_CASE("epsilon heuristic matches the exhaustive oracle") {
  Rng rng(54);
  const PointCloud pc = random_cloud(rng, 100, 2);
  std::vector<double> d2;
  for (int i = 0; i < 100; ++i) {
    for (int j = i + 1; j < 100; ++j) {
      d2.push_back((pc.points.row(i) - pc.points.row(j)).squaredNorm());
    }
  }
  std::sort(d2.begin(), d2.end());
  const double expected = 0.5 * (d2[d2.size() / 2 - 1] + d2[d2.size() / 2]);
  CHECK(epsilon_heuristic(pc) == expected);
}

TEST_CASE("epsilon heuristic rejects a collapsed cloud") {
  PointCloud pc{Eigen::MatrixXd::Zero(3, 2)};
  CHECK_THROWS_AS(epsilon_heuristic(pc), InvalidInputError);
}
