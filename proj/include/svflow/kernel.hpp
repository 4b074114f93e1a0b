#pragma once

#include "svflow/point_cloud.hpp"
#include "svflow/spd_matrix.hpp"

namespace svflow {

// Gaussian affinity kernel K_ij = exp(-|s_i - s_j|^2 / epsilon). The diagonal
// is exactly 1. Exactly coincident points make the kernel singular and are
// rejected.
SpdMatrix gaussian_kernel(const PointCloud& pc, double epsilon);

// Symmetric diffusion normalization D^{-1/2} K D^{-1/2} with D = diag(row
// sums). The result has top eigenvalue 1 with a componentwise-positive
// leading eigenvector proportional to D^{1/2} * ones.
SpdMatrix normalize_kernel(const SpdMatrix& kernel);

// Median of all n(n-1)/2 squared pairwise distances (even counts average the
// two central values). Errors if the median is zero.
double epsilon_heuristic(const PointCloud& pc);

}  // namespace svflow
