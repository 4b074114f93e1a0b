#pragma once

#include <Eigen/Core>
#include <complex>

namespace svflow {

// Eigenvalues sorted descending; column k of eigenvectors pairs with
// eigenvalues[k]. All eigenvalues are strictly positive.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

using ComplexVector = Eigen::VectorXcd;

// What to do with eigenvalues that fall below the positive-definiteness floor
// (1e-14 relative to the largest). Dense affinity kernels are positive
// definite in exact arithmetic but reach the floating-point floor at moderate
// sizes, so the kernel pipeline clamps; direct construction rejects.
enum class EigenvalueFloor { reject, clamp };

// Dense symmetric positive-definite matrix. The eigendecomposition is computed
// once at construction and shared by all powers. Immutable afterwards; safe
// for concurrent reads.
class SpdMatrix {
 public:
  // Validates symmetry (asymmetry up to 1e-12 * max|entry| is symmetrized
  // away, larger is an error) and positive definiteness.
  explicit SpdMatrix(const Eigen::MatrixXd& entries,
                     EigenvalueFloor floor_policy = EigenvalueFloor::reject);

  // Builds sum_k lambda_k q_k q_k^T from an orthonormal column basis and a
  // descending positive spectrum, keeping the decomposition as given.
  static SpdMatrix from_decomposition(const Eigen::MatrixXd& eigenvectors,
                                      const Eigen::VectorXd& eigenvalues);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  const EigenDecomposition& decomposition() const { return decomp_; }

  // Largest eigenvalue == operator norm.
  double norm() const { return decomp_.eigenvalues(0); }

  SpdMatrix power(double exponent) const;

 private:
  SpdMatrix() = default;

  Eigen::MatrixXd entries_;
  EigenDecomposition decomp_;
};

// Relative floor below which eigenvalues are considered not positive.
inline constexpr double kEigenvalueFloorRel = 1e-14;
// Relative asymmetry tolerated (and symmetrized away) at construction.
inline constexpr double kSymmetryTolRel = 1e-12;

const EigenDecomposition& eigendecompose(const SpdMatrix& m);

// sum_k lambda_k^x q_k q_k^T. Any finite exponent is accepted; overflowing
// powers raise NumericError.
SpdMatrix real_power(const EigenDecomposition& d, double exponent);

// sum_k exp(i t log lambda_k) <v, q_k> q_k. Norm-preserving for every t.
ComplexVector complex_power_apply(const EigenDecomposition& d, double t,
                                  const Eigen::VectorXd& v);

// Largest singular value of an arbitrary real matrix.
double operator_norm(const Eigen::MatrixXd& m);

}  // namespace svflow
