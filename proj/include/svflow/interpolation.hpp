#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svflow/spd_matrix.hpp"

namespace svflow {

// Uniform grid x_i = i / m_segments on [0, 1].
struct InterpolationGrid {
  int m_segments = 0;
  std::vector<double> points;

  static InterpolationGrid uniform(int m_segments);
};

// Top-K singular triplets of the interpolated matrix at one grid coordinate.
// Columns of left_vectors/right_vectors are unit; values descend.
struct SvdSlice {
  double x = 0.0;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd left_vectors;
  Eigen::MatrixXd right_vectors;
};

struct DiagramMeta {
  Eigen::Index n = 0;
  std::optional<double> epsilon_a;
  std::optional<double> epsilon_b;
  std::string input_hash_a;
  std::string input_hash_b;
};

struct SvfdDiagram {
  InterpolationGrid grid;
  int k_top = 0;
  std::vector<SvdSlice> slices;
  DiagramMeta meta;

  bool has_vectors() const {
    return !slices.empty() && slices.front().left_vectors.size() > 0;
  }
};

// A^{1-x} B^x. Non-symmetric in general for 0 < x < 1.
Eigen::MatrixXd interpolate(const SpdMatrix& a, const SpdMatrix& b, double x);

// Top-k singular triplets via full dense SVD. Sign convention: the first
// component of each left vector exceeding 1e-12 in magnitude is made
// positive (the right vector flips along) so output is reproducible.
// The slice's x is left at 0 for the caller to assign.
SvdSlice top_k_svd(const Eigen::MatrixXd& m, int k);

// Evaluates the interpolated family on the uniform grid and keeps the top
// k_top triplets per grid point. Slices are computed in parallel; output is
// identical regardless of scheduling.
SvfdDiagram compute_svfd(const SpdMatrix& a, const SpdMatrix& b,
                         int m_segments, int k_top);

}  // namespace svflow
