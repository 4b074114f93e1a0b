#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "svflow/errors.hpp"
#include "svflow/rng.hpp"
#include "svflow/spd_matrix.hpp"

using namespace svflow;

namespace {

// Independent rebuild of sum_k lambda_k q_k q_k^T, element loops only.
Eigen::MatrixXd brute_force_rebuild(const EigenDecomposition& d) {
  const Eigen::Index n = d.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        out(i, j) += d.eigenvalues(k) * d.eigenvectors(i, k) * d.eigenvectors(j, k);
      }
    }
  }
  return out;
}

// Randomized lower-bound oracle for the operator norm: the best of many
// random unit vectors, refined by power iterations on m^T m.
double power_iteration_norm(const Eigen::MatrixXd& m, int samples, Rng& rng) {
  Eigen::VectorXd best;
  double best_val = -1.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd v = random_matrix(rng, m.cols(), 1).col(0).normalized();
    const double val = (m * v).norm();
    if (val > best_val) {
      best_val = val;
      best = v;
    }
  }
  for (int it = 0; it < 500; ++it) {
    best = (m.transpose() * (m * best)).normalized();
  }
  return (m * best).norm();
}

}  // namespace

TEST_CASE("eigendecompose identity") {
  const SpdMatrix m(Eigen::MatrixXd::Identity(3, 3));
  const EigenDecomposition& d = m.decomposition();
  for (int k = 0; k < 3; ++k) CHECK(d.eigenvalues(k) == doctest::Approx(1.0).epsilon(1e-14));
  const Eigen::MatrixXd gram = d.eigenvectors.transpose() * d.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("eigendecompose diagonal") {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 0.0, 0.0, 1.0;
  const SpdMatrix spd(m);
  const EigenDecomposition& d = spd.decomposition();
  CHECK(d.eigenvalues(0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(d.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(d.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(d.eigenvectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigendecomposition reconstructs the input") {
  Rng rng(11);
  const SpdMatrix m = random_spd(rng, 8, 0.1, 10.0);
  const Eigen::MatrixXd rebuilt = brute_force_rebuild(m.decomposition());
  const double lambda1 = m.decomposition().eigenvalues(0);
  CHECK((rebuilt - m.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * lambda1);

  // Orthonormality of the eigenbasis.
  const Eigen::Index n = m.dim();
  const Eigen::MatrixXd gram =
      m.decomposition().eigenvectors.transpose() * m.decomposition().eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("round-trip residual stays small up to n=200") {
  Rng rng(12);
  const SpdMatrix m = random_spd(rng, 200, 1e-3, 1e3);
  const Eigen::MatrixXd rebuilt =
      m.decomposition().eigenvectors *
      m.decomposition().eigenvalues.asDiagonal() *
      m.decomposition().eigenvectors.transpose();
  CHECK((rebuilt - m.matrix()).cwiseAbs().maxCoeff() <=
        1e-10 * m.decomposition().eigenvalues(0));
}

TEST_CASE("construction rejects asymmetry and indefiniteness") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(SpdMatrix{asym}, InvalidInputError);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(SpdMatrix{indefinite}, NumericError);

  // Tiny asymmetry from roundoff is symmetrized away.
  Eigen::MatrixXd nearly(2, 2);
  nearly << 1.0, 0.5 + 1e-13, 0.5, 1.0;
  CHECK_NOTHROW(SpdMatrix{nearly});
}

TEST_CASE("eigenvalue floor: reject vs clamp") {
  Eigen::MatrixXd nearly_singular(2, 2);
  nearly_singular << 1.0, 0.0, 0.0, 1e-20;
  CHECK_THROWS_AS(SpdMatrix{nearly_singular}, NumericError);
  const SpdMatrix clamped(nearly_singular, EigenvalueFloor::clamp);
  CHECK(clamped.decomposition().eigenvalues(1) == doctest::Approx(1e-14));
  // Entries are kept as given; only the spectrum is floored.
  CHECK(clamped.matrix()(1, 1) == 1e-20);
}

TEST_CASE("real_power basics") {
  const SpdMatrix identity(Eigen::MatrixXd::Identity(4, 4));
  const SpdMatrix p = real_power(identity.decomposition(), 0.37);
  CHECK((p.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);

  Eigen::MatrixXd diag(2, 2);
  diag << 4.0, 0.0, 0.0, 1.0;
  const SpdMatrix root = SpdMatrix(diag).power(0.5);
  CHECK(root.matrix()(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(root.matrix()(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(root.matrix()(0, 1)) <= 1e-14);
}

TEST_CASE("real_power semigroup property") {
  Rng rng(21);
  const SpdMatrix m = random_spd(rng, 6, 0.2, 5.0);
  const Eigen::MatrixXd product = m.power(0.3).matrix() * m.power(0.7).matrix();
  CHECK(operator_norm(product - m.matrix()) <= 1e-10);
}

TEST_CASE("real_power exponent 1 reproduces the matrix") {
  Rng rng(22);
  const SpdMatrix m = random_spd(rng, 10, 1e-2, 1e2);
  CHECK(operator_norm(m.power(1.0).matrix() - m.matrix()) <= 1e-10 * m.norm());
}

TEST_CASE("real_power negative exponent inverts") {
  Rng rng(23);
  const SpdMatrix m = random_spd(rng, 5, 0.5, 2.0);
  const Eigen::MatrixXd product = m.power(-1.0).matrix() * m.matrix();
  CHECK(operator_norm(product - Eigen::MatrixXd::Identity(5, 5)) <= 1e-12);
}

TEST_CASE("real_power overflow raises") {
  Eigen::MatrixXd big(2, 2);
  big << 1e150, 0.0, 0.0, 1e140;
  const SpdMatrix m(big);
  CHECK_THROWS_AS(m.power(2.5), NumericError);
}

TEST_CASE("unit-norm matrices keep norm one under powers") {
  Rng rng(24);
  const SpdMatrix m = random_spd(rng, 12, 1e-3, 1.0, /*unit_norm=*/true);
  for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    CHECK(std::abs(operator_norm(m.power(x).matrix()) - 1.0) <= 1e-12);
  }
}

TEST_CASE("complex_power_apply at t=0 is the identity") {
  Rng rng(31);
  const SpdMatrix m = random_spd(rng, 6, 0.1, 10.0);
  const Eigen::VectorXd v = random_matrix(rng, 6, 1).col(0);
  const ComplexVector out = complex_power_apply(m.decomposition(), 0.0, v);
  CHECK((out.real() - v).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(out.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("complex_power_apply on the identity is the identity") {
  const SpdMatrix identity(Eigen::MatrixXd::Identity(5, 5));
  Rng rng(32);
  const Eigen::VectorXd v = random_matrix(rng, 5, 1).col(0);
  const ComplexVector out = complex_power_apply(identity.decomposition(), 2.9, v);
  CHECK((out.real() - v).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(out.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("imaginary powers preserve the norm") {
  Rng rng(33);
  const SpdMatrix m = random_spd(rng, 10, 1e-2, 1e2);
  const Eigen::VectorXd v = random_matrix(rng, 10, 1).col(0).normalized();
  CHECK(std::abs(complex_power_apply(m.decomposition(), 1.7, v).norm() - 1.0) <=
        1e-10);
  for (double t : {-5.0, -1.3, 0.4, 5.0}) {
    const Eigen::VectorXd w = random_matrix(rng, 10, 1).col(0);
    CHECK(std::abs(complex_power_apply(m.decomposition(), t, w).norm() - w.norm()) <=
          1e-10);
  }
}

TEST_CASE("operator_norm basics") {
  CHECK(operator_norm(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
  Eigen::MatrixXd diag(2, 2);
  diag << 3.0, 0.0, 0.0, -5.0;
  CHECK(operator_norm(diag) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("operator_norm matches the randomized oracle") {
  Rng rng(41);
  const Eigen::MatrixXd m = random_matrix(rng, 6, 6);
  Rng oracle_rng(42);
  // Raw sampled maxima are lower bounds.
  double sampled_max = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Eigen::VectorXd v = random_matrix(oracle_rng, 6, 1).col(0).normalized();
    sampled_max = std::max(sampled_max, (m * v).norm());
  }
  const double norm = operator_norm(m);
  CHECK(sampled_max <= norm + 1e-10);
  Rng refine_rng(43);
  CHECK(std::abs(power_iteration_norm(m, 10000, refine_rng) - norm) <= 1e-6);
}
