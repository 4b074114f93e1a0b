#include "svflow/spd_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "svflow/errors.hpp"

namespace svflow {

namespace {

EigenDecomposition decompose_symmetric(const Eigen::MatrixXd& sym,
                                       EigenvalueFloor floor_policy) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition failed to converge");
  }
  const Eigen::Index n = sym.rows();

  // Eigen sorts ascending; flip to descending.
  EigenDecomposition d;
  d.eigenvalues = solver.eigenvalues().reverse();
  d.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double top = d.eigenvalues(0);
  if (!(top > 0.0)) {
    std::ostringstream msg;
    msg << "matrix is not positive definite: largest eigenvalue " << top;
    throw NumericError(msg.str());
  }
  const double floor = kEigenvalueFloorRel * top;
  const double smallest = d.eigenvalues(n - 1);
  if (smallest < floor) {
    if (floor_policy == EigenvalueFloor::reject) {
      std::ostringstream msg;
      msg << "matrix is not positive definite: eigenvalue " << smallest
          << " below floor " << floor;
      throw NumericError(msg.str());
    }
    d.eigenvalues = d.eigenvalues.cwiseMax(floor);
  }
  return d;
}

}  // namespace

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& entries,
                     EigenvalueFloor floor_policy) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw InvalidInputError("SPD matrix must be square and non-empty");
  }
  if (!entries.allFinite()) {
    throw InvalidInputError("SPD matrix has non-finite entries");
  }
  const double scale = entries.cwiseAbs().maxCoeff();
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolRel * scale) {
    std::ostringstream msg;
    msg << "matrix is not symmetric: max asymmetry " << asym << " exceeds "
        << kSymmetryTolRel * scale;
    throw InvalidInputError(msg.str());
  }
  entries_ = 0.5 * (entries + entries.transpose());
  decomp_ = decompose_symmetric(entries_, floor_policy);
}

SpdMatrix SpdMatrix::from_decomposition(const Eigen::MatrixXd& eigenvectors,
                                        const Eigen::VectorXd& eigenvalues) {
  const Eigen::Index n = eigenvalues.size();
  if (eigenvectors.rows() != n || eigenvectors.cols() != n || n == 0) {
    throw InvalidInputError("decomposition shape mismatch");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(eigenvalues(k) > 0.0) || !std::isfinite(eigenvalues(k))) {
      throw NumericError("decomposition has a non-positive eigenvalue");
    }
    if (k > 0 && eigenvalues(k) > eigenvalues(k - 1)) {
      throw InvalidInputError("eigenvalues must be sorted descending");
    }
  }
  SpdMatrix m;
  m.decomp_.eigenvalues = eigenvalues;
  m.decomp_.eigenvectors = eigenvectors;
  Eigen::MatrixXd rebuilt =
      eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  m.entries_ = 0.5 * (rebuilt + rebuilt.transpose());
  return m;
}

SpdMatrix SpdMatrix::power(double exponent) const {
  return real_power(decomp_, exponent);
}

const EigenDecomposition& eigendecompose(const SpdMatrix& m) {
  return m.decomposition();
}

SpdMatrix real_power(const EigenDecomposition& d, double exponent) {
  if (!std::isfinite(exponent)) {
    throw InvalidInputError("power exponent must be finite");
  }
  const Eigen::Index n = d.dim();
  Eigen::VectorXd powered(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    powered(k) = std::pow(d.eigenvalues(k), exponent);
    if (!std::isfinite(powered(k)) || powered(k) <= 0.0) {
      std::ostringstream msg;
      msg << "overflow in eigenvalue power " << d.eigenvalues(k) << "^"
          << exponent;
      throw NumericError(msg.str());
    }
  }
  // Negative exponents reverse the ordering; re-sort to keep the invariant.
  if (exponent >= 0.0) {
    return SpdMatrix::from_decomposition(d.eigenvectors, powered);
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return powered(a) > powered(b);
  });
  Eigen::VectorXd sorted_vals(n);
  Eigen::MatrixXd sorted_vecs(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted_vals(k) = powered(order[static_cast<std::size_t>(k)]);
    sorted_vecs.col(k) = d.eigenvectors.col(order[static_cast<std::size_t>(k)]);
  }
  return SpdMatrix::from_decomposition(sorted_vecs, sorted_vals);
}

ComplexVector complex_power_apply(const EigenDecomposition& d, double t,
                                  const Eigen::VectorXd& v) {
  if (v.size() != d.dim()) {
    throw InvalidInputError("vector dimension does not match decomposition");
  }
  const Eigen::VectorXd coeffs = d.eigenvectors.transpose() * v;
  ComplexVector scaled(d.dim());
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    const double phase = t * std::log(d.eigenvalues(k));
    scaled(k) = std::complex<double>(std::cos(phase), std::sin(phase)) * coeffs(k);
  }
  return d.eigenvectors.cast<std::complex<double>>() * scaled;
}

double operator_norm(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) {
    throw InvalidInputError("operator_norm requires finite entries");
  }
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace svflow
