#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "svflow/analysis.hpp"
#include "svflow/interpolation.hpp"
#include "svflow/kernel.hpp"
#include "svflow/oracles.hpp"
#include "svflow/rng.hpp"

using namespace svflow;

namespace {

// Least-squares affine fit via an SVD solve, independent of the closed-form
// path used by log_linearity_score.
double max_affine_residual(const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  Eigen::MatrixXd design(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const Eigen::VectorXd coef =
      design.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  return (y - design * coef).cwiseAbs().maxCoeff();
}

Eigen::VectorXd interpolation_log_curve(const SpdMatrix& a, const SpdMatrix& b,
                                        const Eigen::VectorXd& v, int segments) {
  Eigen::VectorXd y(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    const double x = static_cast<double>(i) / segments;
    y(i) = std::log((interpolate(a, b, x) * v).norm());
  }
  return y;
}

}  // namespace

TEST_CASE("mcintosh equality case: X identity, equal factors") {
  Rng rng(101);
  const SpdMatrix a = random_spd(rng, 5, 0.2, 5.0);
  const double r = 0.37;
  const double lhs =
      operator_norm(a.power(r).matrix() * a.power(1.0 - r).matrix());
  const double rhs = std::pow(operator_norm(a.matrix()), r) *
                     std::pow(operator_norm(a.matrix()), 1.0 - r);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
}

TEST_CASE("mcintosh near the r=0 boundary") {
  Rng rng(102);
  const SpdMatrix a = random_spd(rng, 6, 0.1, 10.0);
  const SpdMatrix b = random_spd(rng, 6, 0.1, 10.0);
  const Eigen::MatrixXd x = random_matrix(rng, 6, 6);
  const double r = 1e-6;
  const double lhs =
      operator_norm(a.power(r).matrix() * x * b.power(1.0 - r).matrix());
  const double rhs = std::pow(operator_norm(a.matrix() * x), r) *
                     std::pow(operator_norm(x * b.matrix()), 1.0 - r);
  CHECK(lhs <= rhs * (1.0 + 1e-10));
  CHECK(std::abs(rhs - operator_norm(x * b.matrix())) <=
        1e-4 * operator_norm(x * b.matrix()));
}

TEST_CASE("mcintosh oracle passes") {
  const OracleOutcome outcome = check_mcintosh(6, 200, 7);
  CHECK(outcome.passed);
  CHECK(outcome.trials == 200);
  CHECK(outcome.worst_margin >= -1e-10);
}

TEST_CASE("shared eigenvector gives an exactly geometric curve") {
  Rng rng(103);
  const int n = 4;
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  Eigen::VectorXd lambdas(n), mus(n);
  lambdas << 2.0, 1.4, 0.9, 0.7;
  mus << 1.5, 1.2, 1.0, 0.6;
  const SpdMatrix a = SpdMatrix::from_decomposition(q, lambdas);
  const SpdMatrix b = SpdMatrix::from_decomposition(q, mus);

  const Eigen::VectorXd curve = interpolation_log_curve(a, b, q.col(0), 20);
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const double expected = std::pow(2.0, 1.0 - x) * std::pow(1.5, x);
    CHECK(std::abs(curve(i) - std::log(expected)) <= 1e-12);
  }
  CHECK(max_affine_residual(curve) <= 1e-10);
}

TEST_CASE("a two-mode mixture is visibly non-affine") {
  Eigen::VectorXd lambdas(5), mus(5);
  lambdas << 2.0, 1.7, 1.3, 1.1, 0.9;
  mus << 1.9, 1.2, 1.05, 0.8, 0.6;
  const SpdMatrix a(Eigen::MatrixXd(lambdas.asDiagonal()));
  const SpdMatrix b(Eigen::MatrixXd(mus.asDiagonal()));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(5);
  v(0) = 1.0 / std::sqrt(2.0);
  v(1) = 1.0 / std::sqrt(2.0);

  const Eigen::VectorXd curve = interpolation_log_curve(a, b, v, 20);
  // Closed form: |gamma(x) v|^2 = (r1(x)^2 + r2(x)^2) / 2 with
  // rk(x) = lambda_k^{1-x} mu_k^x.
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const double r1 = std::pow(lambdas(0), 1.0 - x) * std::pow(mus(0), x);
    const double r2 = std::pow(lambdas(1), 1.0 - x) * std::pow(mus(1), x);
    CHECK(std::abs(curve(i) - 0.5 * std::log(0.5 * (r1 * r1 + r2 * r2))) <=
          1e-12);
  }
  CHECK(max_affine_residual(curve) > 1e-4);
}

TEST_CASE("generic diagonal pairs give affine tracked curves") {
  Rng rng(104);
  const int n = 10;
  Eigen::VectorXd da(n), db(n);
  for (int k = 0; k < n; ++k) da(k) = rng.uniform(1.0, 2.0);
  for (int k = 0; k < n; ++k) db(k) = rng.uniform(1.0, 2.0);
  std::sort(da.data(), da.data() + n, std::greater<double>());
  const SpdMatrix a(Eigen::MatrixXd(da.asDiagonal()));
  const SpdMatrix b(Eigen::MatrixXd(db.asDiagonal()));
  const SvfdDiagram diagram = compute_svfd(a, b, 51, n);
  for (const Trajectory& t : track_trajectories(diagram)) {
    CHECK(log_linearity_score(t) <= 1e-9);
  }
}

TEST_CASE("identifiability oracle passes") {
  const OracleOutcome outcome = check_identifiability(8, 5, 11);
  CHECK(outcome.passed);
  CHECK(outcome.worst_margin >= 0.0);
}

TEST_CASE("stability equality case: identical kernels") {
  Rng rng(105);
  PointCloud pc{Eigen::MatrixXd(15, 3)};
  for (int i = 0; i < 15; ++i) {
    for (int d = 0; d < 3; ++d) pc.points(i, d) = rng.uniform01();
  }
  const SpdMatrix a = normalize_kernel(gaussian_kernel(pc, epsilon_heuristic(pc)));
  const SvdSlice top = top_k_svd(interpolate(a, a, 0.5), 1);
  const double sigma = top.singular_values(0);
  CHECK(std::abs(sigma - 1.0) <= 1e-12);
  const Eigen::VectorXd a1 = a.decomposition().eigenvectors.col(0);
  const double measured = std::pow(top.left_vectors.col(0).dot(a1), 2);
  const double bound = *alignment_bound(std::min(sigma, 1.0), 0.5,
                                        a.decomposition().eigenvalues(1),
                                        BoundSide::left);
  CHECK(measured >= bound - 1e-10);
  CHECK(measured == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bound == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stability bound on an explicit rotated 3x3 pair") {
  Eigen::VectorXd la(3), lb(3);
  la << 1.0, 0.6, 0.3;
  lb << 1.0, 0.5, 0.2;
  const Eigen::MatrixXd qa = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd rot(3, 3);
  const double angle = 0.1;
  rot << std::cos(angle), -std::sin(angle), 0.0,
         std::sin(angle),  std::cos(angle), 0.0,
         0.0,              0.0,             1.0;
  const SpdMatrix a = SpdMatrix::from_decomposition(qa, la);
  const SpdMatrix b = SpdMatrix::from_decomposition(rot, lb);

  const double x = 0.5;
  const SvdSlice top = top_k_svd(interpolate(a, b, x), 1);
  const double sigma = std::min(top.singular_values(0), 1.0);
  const double measured_a = std::pow(top.left_vectors.col(0).dot(qa.col(0)), 2);
  const double measured_b = std::pow(top.right_vectors.col(0).dot(rot.col(0)), 2);
  const double bound_a = *alignment_bound(sigma, x, la(1), BoundSide::left);
  const double bound_b = *alignment_bound(sigma, x, lb(1), BoundSide::right);
  CHECK(bound_a > 0.0);
  CHECK(bound_b > 0.0);
  CHECK(measured_a >= bound_a);
  CHECK(measured_b >= bound_b);
}

TEST_CASE("stability oracle passes on a small batch") {
  const OracleOutcome outcome = check_stability(20, 10, 3);
  CHECK(outcome.passed);
  CHECK(outcome.trials == 10);
  CHECK(outcome.worst_margin >= -1e-10);
}

TEST_CASE("refinement oracle passes on a small batch") {
  const OracleOutcome outcome = check_refinement(20, 10, 3);
  CHECK(outcome.passed);
  CHECK(outcome.worst_margin >= -1e-12);
}

TEST_CASE("oracles are deterministic in the seed") {
  const OracleOutcome once = check_mcintosh(5, 50, 99);
  const OracleOutcome twice = check_mcintosh(5, 50, 99);
  CHECK(once.worst_margin == twice.worst_margin);
  const OracleOutcome other = check_mcintosh(5, 50, 100);
  CHECK(once.worst_margin != other.worst_margin);
}
