#include "svflow/interpolation.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "svflow/errors.hpp"
#include "svflow/parallel.hpp"

namespace svflow {

InterpolationGrid InterpolationGrid::uniform(int m_segments) {
  if (m_segments < 1) {
    throw InvalidInputError("grid needs at least one segment");
  }
  InterpolationGrid grid;
  grid.m_segments = m_segments;
  grid.points.resize(static_cast<std::size_t>(m_segments) + 1);
  for (int i = 0; i <= m_segments; ++i) {
    grid.points[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / m_segments;
  }
  return grid;
}

Eigen::MatrixXd interpolate(const SpdMatrix& a, const SpdMatrix& b, double x) {
  if (a.dim() != b.dim()) {
    throw InvalidInputError("interpolation endpoints differ in dimension");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidInputError("interpolation coordinate must lie in [0, 1]");
  }
  return a.power(1.0 - x).matrix() * b.power(x).matrix();
}

SvdSlice top_k_svd(const Eigen::MatrixXd& m, int k) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInputError("SVD input must be square and non-empty");
  }
  if (k < 1 || k > m.rows()) {
    throw InvalidInputError("requested singular value count exceeds dimension");
  }
  if (!m.allFinite()) {
    throw InvalidInputError("SVD input has non-finite entries");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdSlice slice;
  slice.singular_values = svd.singularValues().head(k);
  slice.left_vectors = svd.matrixU().leftCols(k);
  slice.right_vectors = svd.matrixV().leftCols(k);
  for (int c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double u = slice.left_vectors(r, c);
      if (std::abs(u) > 1e-12) {
        if (u < 0.0) {
          slice.left_vectors.col(c) = -slice.left_vectors.col(c);
          slice.right_vectors.col(c) = -slice.right_vectors.col(c);
        }
        break;
      }
    }
  }
  return slice;
}

SvfdDiagram compute_svfd(const SpdMatrix& a, const SpdMatrix& b,
                         int m_segments, int k_top) {
  if (a.dim() != b.dim()) {
    throw InvalidInputError("interpolation endpoints differ in dimension");
  }
  if (k_top < 1 || k_top > a.dim()) {
    throw InvalidInputError("k_top must lie in [1, n]");
  }
  SvfdDiagram diagram;
  diagram.grid = InterpolationGrid::uniform(m_segments);
  diagram.k_top = k_top;
  diagram.meta.n = a.dim();
  diagram.slices.resize(diagram.grid.points.size());

  parallel_for(static_cast<std::ptrdiff_t>(diagram.slices.size()),
               [&](std::ptrdiff_t i) {
                 const double x = diagram.grid.points[static_cast<std::size_t>(i)];
                 SvdSlice slice = top_k_svd(interpolate(a, b, x), k_top);
                 slice.x = x;
                 diagram.slices[static_cast<std::size_t>(i)] = std::move(slice);
               });
  return diagram;
}

}  // namespace svflow
