#include "svflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "svflow/analysis.hpp"
#include "svflow/errors.hpp"
#include "svflow/interpolation.hpp"
#include "svflow/kernel.hpp"
#include "svflow/rng.hpp"

namespace svflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Max absolute residual of the affine least-squares fit of y against the
// uniform grid implied by its length.
double affine_residual(const Eigen::VectorXd& y) {
  Trajectory t;
  t.values = y.array().exp();
  return log_linearity_score(t);
}

// log |A^{1-x} B^x v| sampled on a uniform grid with the given segment count.
Eigen::VectorXd log_curve(const SpdMatrix& a, const SpdMatrix& b,
                          const Eigen::VectorXd& v, int m_segments) {
  Eigen::VectorXd y(m_segments + 1);
  for (int i = 0; i <= m_segments; ++i) {
    const double x = static_cast<double>(i) / m_segments;
    y(i) = std::log(
        (a.power(1.0 - x).matrix() * (b.power(x).matrix() * v)).norm());
  }
  return y;
}

// All n^2 eigenvalue ratios pairwise distinct to relative tolerance 1e-9.
bool ratio_map_injective(const Eigen::VectorXd& lambdas,
                         const Eigen::VectorXd& mus) {
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(lambdas.size()) * mus.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    for (Eigen::Index j = 0; j < mus.size(); ++j) {
      ratios.push_back(lambdas(i) / mus(j));
    }
  }
  std::sort(ratios.begin(), ratios.end());
  for (std::size_t k = 0; k + 1 < ratios.size(); ++k) {
    if (ratios[k + 1] - ratios[k] <= 1e-9 * ratios[k + 1]) return false;
  }
  return true;
}

// Deterministic per-trial kernel pair from two random point clouds in the
// unit cube, shared by the stability and refinement checks.
std::pair<SpdMatrix, SpdMatrix> kernel_pair(std::uint64_t seed,
                                            std::uint64_t trial, int n) {
  Rng rng(derive_seed(seed, trial));
  PointCloud cloud_a{Eigen::MatrixXd(n, 3)};
  PointCloud cloud_b{Eigen::MatrixXd(n, 3)};
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < 3; ++d) cloud_a.points(i, d) = rng.uniform01();
  }
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < 3; ++d) cloud_b.points(i, d) = rng.uniform01();
  }
  return {normalize_kernel(gaussian_kernel(cloud_a, epsilon_heuristic(cloud_a))),
          normalize_kernel(gaussian_kernel(cloud_b, epsilon_heuristic(cloud_b)))};
}

}  // namespace

OracleOutcome check_mcintosh(int n, int trials, std::uint64_t seed) {
  OracleOutcome outcome;
  outcome.name = "mcintosh_inequality";
  outcome.trials = trials;
  outcome.tolerance = 1e-10;
  outcome.worst_margin = kInf;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    const SpdMatrix a = random_spd(rng, n, 0.1, 10.0);
    const SpdMatrix b = random_spd(rng, n, 0.1, 10.0);
    const Eigen::MatrixXd x = random_matrix(rng, n, n);
    double r = rng.uniform01();
    while (r <= 0.0) r = rng.uniform01();

    const double lhs =
        operator_norm(a.power(r).matrix() * x * b.power(1.0 - r).matrix());
    const double rhs = std::pow(operator_norm(a.matrix() * x), r) *
                       std::pow(operator_norm(x * b.matrix()), 1.0 - r);
    outcome.worst_margin = std::min(outcome.worst_margin, (rhs - lhs) / rhs);
  }
  outcome.passed = outcome.worst_margin >= -outcome.tolerance;
  return outcome;
}

OracleOutcome check_identifiability(int n, int trials, std::uint64_t seed,
                                    double generic_tol) {
  constexpr int kGridSegments = 20;
  constexpr double kForwardTol = 1e-10;
  OracleOutcome outcome;
  outcome.name = "identifiability";
  outcome.trials = trials;
  outcome.tolerance = 0.0;
  outcome.worst_margin = kInf;

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));

    // Forward: jointly diagonalized pair, v a shared eigenvector, so the
    // curve must be affine.
    {
      const Eigen::MatrixXd q = random_orthogonal(rng, n);
      Eigen::VectorXd lambdas(n), mus(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        lambdas(k) = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
        mus(k) = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
      }
      std::sort(lambdas.data(), lambdas.data() + n, std::greater<double>());
      const SpdMatrix a = SpdMatrix::from_decomposition(q, lambdas);
      // B shares the eigenvectors but not the ordering of its spectrum.
      Eigen::MatrixXd b_dense =
          q * mus.asDiagonal() * q.transpose();
      const SpdMatrix b((b_dense + b_dense.transpose()) / 2.0);
      const int pick = rng.uniform_int(0, static_cast<int>(n) - 1);
      const double residual =
          affine_residual(log_curve(a, b, q.col(pick), kGridSegments));
      outcome.worst_margin =
          std::min(outcome.worst_margin, kForwardTol - residual);
    }

    // Generic: independent eigenbases, injective ratio map, v away from
    // every eigenvector of B; the curve must not be affine.
    {
      SpdMatrix a = random_spd(rng, n, 0.5, 2.0);
      SpdMatrix b = random_spd(rng, n, 0.5, 2.0);
      int resamples = 0;
      while (!ratio_map_injective(a.decomposition().eigenvalues,
                                  b.decomposition().eigenvalues)) {
        ++outcome.skipped;
        if (++resamples > 100) {
          throw NumericError("could not sample an injective ratio map");
        }
        a = random_spd(rng, n, 0.5, 2.0);
        b = random_spd(rng, n, 0.5, 2.0);
      }
      Eigen::VectorXd v;
      double eig_distance = 0.0;
      do {
        v = random_matrix(rng, n, 1).col(0).normalized();
        const Eigen::VectorXd bv = (b.matrix() * v).normalized();
        eig_distance = (bv - bv.dot(v) * v).norm();
      } while (eig_distance < 0.05);
      const double residual =
          affine_residual(log_curve(a, b, v, kGridSegments));
      outcome.worst_margin =
          std::min(outcome.worst_margin, residual - generic_tol);
    }
  }
  outcome.passed = outcome.worst_margin >= -outcome.tolerance;
  return outcome;
}

OracleOutcome check_stability(int n, int trials, std::uint64_t seed,
                              int m_segments) {
  OracleOutcome outcome;
  outcome.name = "stability_bounds";
  outcome.trials = trials;
  outcome.tolerance = 1e-10;
  outcome.worst_margin = kInf;

  for (int trial = 0; trial < trials; ++trial) {
    const auto [a, b] = kernel_pair(seed, static_cast<std::uint64_t>(trial), n);
    const double gap_a = a.decomposition().eigenvalues(1);
    const double gap_b = b.decomposition().eigenvalues(1);
    if (gap_a > 1.0 - 1e-8 || gap_b > 1.0 - 1e-8) {
      ++outcome.skipped;
      continue;
    }
    const Eigen::VectorXd a1 = a.decomposition().eigenvectors.col(0);
    const Eigen::VectorXd b1 = b.decomposition().eigenvectors.col(0);
    for (int i = 1; i < m_segments; ++i) {
      const double x = static_cast<double>(i) / m_segments;
      const SvdSlice top = top_k_svd(interpolate(a, b, x), 1);
      const double sigma = top.singular_values(0);
      if (sigma > 1.0 + 1e-12) {
        // Interpolation norm bound violated; fail decisively.
        outcome.worst_margin = -1.0;
        continue;
      }
      const double s = std::min(sigma, 1.0);
      const double measured_a = std::pow(top.left_vectors.col(0).dot(a1), 2);
      const double measured_b = std::pow(top.right_vectors.col(0).dot(b1), 2);
      const auto bound_a = alignment_bound(s, x, gap_a, BoundSide::left);
      const auto bound_b = alignment_bound(s, x, gap_b, BoundSide::right);
      if (bound_a && *bound_a > 0.0) {
        outcome.worst_margin =
            std::min(outcome.worst_margin, measured_a - *bound_a);
      }
      if (bound_b && *bound_b > 0.0) {
        outcome.worst_margin =
            std::min(outcome.worst_margin, measured_b - *bound_b);
      }
    }
  }
  outcome.passed = outcome.worst_margin >= -outcome.tolerance;
  return outcome;
}

OracleOutcome check_refinement(int n, int trials, std::uint64_t seed,
                               int m_segments) {
  OracleOutcome outcome;
  outcome.name = "refinement_dominance";
  outcome.trials = trials;
  outcome.tolerance = 1e-12;
  outcome.worst_margin = kInf;

  for (int trial = 0; trial < trials; ++trial) {
    const auto [a, b] = kernel_pair(seed, static_cast<std::uint64_t>(trial), n);
    const double mu2 = b.decomposition().eigenvalues(1);
    if (b.decomposition().eigenvalues(0) - mu2 < 1e-8) {
      ++outcome.skipped;
      continue;
    }
    for (int i = 1; i < m_segments; ++i) {
      const double x = static_cast<double>(i) / m_segments;
      const SvdSlice top = top_k_svd(interpolate(a, b, x), 1);
      const double s = std::min(top.singular_values(0), 1.0);
      const auto rho = tail_second_moment(top.right_vectors.col(0),
                                          b.decomposition().eigenvalues,
                                          b.decomposition().eigenvectors);
      if (!rho) continue;  // exact alignment, trivially fine
      outcome.worst_margin =
          std::min(outcome.worst_margin, mu2 * mu2 - *rho);
      const double refined = refined_bound(s, x, *rho, BoundSide::right);
      const double baseline = *alignment_bound(s, x, mu2 * mu2, BoundSide::right);
      outcome.worst_margin =
          std::min(outcome.worst_margin, refined - baseline);
    }
  }
  outcome.passed = outcome.worst_margin >= -outcome.tolerance;
  return outcome;
}

std::vector<OracleOutcome> run_all_checks(std::uint64_t seed) {
  return {
      check_mcintosh(6, 1000, seed),
      check_identifiability(10, 50, seed),
      check_stability(30, 100, seed),
      check_refinement(30, 100, seed),
  };
}

}  // namespace svflow
