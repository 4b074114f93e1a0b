#pragma once

#include <Eigen/Core>

#include "svflow/errors.hpp"

namespace svflow {

// n points in R^d, one per row.
struct PointCloud {
  Eigen::MatrixXd points;

  Eigen::Index count() const { return points.rows(); }
  Eigen::Index ambient_dim() const { return points.cols(); }

  void validate() const {
    if (points.rows() < 2) {
      throw InvalidInputError("point cloud needs at least 2 points");
    }
    if (!points.allFinite()) {
      throw InvalidInputError("point cloud contains non-finite coordinates");
    }
  }
};

}  // namespace svflow
