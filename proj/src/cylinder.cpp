#include "svflow/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "svflow/errors.hpp"
#include "svflow/rng.hpp"

namespace svflow {

std::pair<PointCloud, PointCloud> sample_cylinders(const CylinderParams& p) {
  if (!(p.l1 > 0.0 && p.p1 > 0.0 && p.l2 > 0.0 && p.p2 > 0.0)) {
    throw InvalidInputError("cylinder scales must be positive");
  }
  if (p.n < 2) {
    throw InvalidInputError("cylinder sample count must be at least 2");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Rng rng(p.seed);
  PointCloud c1{Eigen::MatrixXd(p.n, 3)};
  PointCloud c2{Eigen::MatrixXd(p.n, 3)};
  for (int i = 0; i < p.n; ++i) {
    const double x = two_pi * rng.uniform01();
    const double y = two_pi * rng.uniform01();
    const double z = two_pi * rng.uniform01();
    c1.points(i, 0) = p.p1 * std::cos(x) / two_pi;
    c1.points(i, 1) = p.p1 * std::sin(x) / two_pi;
    c1.points(i, 2) = p.l1 * z / two_pi;
    c2.points(i, 0) = p.p2 * std::cos(y) / two_pi;
    c2.points(i, 1) = p.p2 * std::sin(y) / two_pi;
    c2.points(i, 2) = p.l2 * z / two_pi;
  }
  return {std::move(c1), std::move(c2)};
}

std::vector<AnalyticEigenvalue> analytic_cylinder_spectrum(double l, double p,
                                                           int k_angular_max,
                                                           int k_z_max) {
  if (!(l > 0.0 && p > 0.0)) {
    throw InvalidInputError("cylinder scales must be positive");
  }
  if (k_angular_max < 0 || k_z_max < 0) {
    throw InvalidInputError("mode index bounds must be nonnegative");
  }
  constexpr double pi = std::numbers::pi;
  std::vector<AnalyticEigenvalue> spectrum;
  spectrum.reserve(static_cast<std::size_t>(k_angular_max + 1) *
                   static_cast<std::size_t>(k_z_max + 1));
  for (int ka = 0; ka <= k_angular_max; ++ka) {
    for (int kz = 0; kz <= k_z_max; ++kz) {
      const double axial = pi * kz / l;
      const double angular = 2.0 * pi * (ka / 2) / p;
      spectrum.push_back({ka, kz, axial * axial + angular * angular});
    }
  }
  std::stable_sort(spectrum.begin(), spectrum.end(),
                   [](const AnalyticEigenvalue& a, const AnalyticEigenvalue& b) {
                     return std::tie(a.value, a.k_z, a.k_angular) <
                            std::tie(b.value, b.k_z, b.k_angular);
                   });
  return spectrum;
}

double eigenvalue_transform(double lambda, double epsilon) {
  if (!(lambda >= 0.0)) {
    throw InvalidInputError("eigenvalue must be nonnegative");
  }
  if (!(epsilon > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  return std::exp(-epsilon * epsilon * lambda / 4.0);
}

}  // namespace svflow
