#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "svflow/point_cloud.hpp"

namespace svflow {

// Two cylindrical surfaces sharing the height coordinate; the azimuthal
// angles are independent.
struct CylinderParams {
  double l1 = 2.0;
  double p1 = 1.25;
  double l2 = 2.0;
  double p2 = 3.0;
  int n = 1000;
  std::uint64_t seed = 0;
};

// Draws, per point, three uniforms x, y, z on [0, 2*pi) (in that order) and
// maps them to
//   s1 = (P1 cos x, P1 sin x, L1 z) / 2pi,  s2 = (P2 cos y, P2 sin y, L2 z) / 2pi.
// Bit-identical output for identical params.
std::pair<PointCloud, PointCloud> sample_cylinders(const CylinderParams& p);

// Closed-form Neumann eigenvalue (pi k_z / L)^2 + (2 pi floor(k_angular/2) / P)^2.
struct AnalyticEigenvalue {
  int k_angular = 0;
  int k_z = 0;
  double value = 0.0;
};

// All index pairs with k_angular <= k_angular_max and k_z <= k_z_max, sorted
// ascending by value with ties ordered by (k_z, k_angular).
std::vector<AnalyticEigenvalue> analytic_cylinder_spectrum(double l, double p,
                                                           int k_angular_max,
                                                           int k_z_max);

// Maps a Laplacian eigenvalue to the kernel scale: exp(-epsilon^2 * lambda / 4).
double eigenvalue_transform(double lambda, double epsilon);

}  // namespace svflow
