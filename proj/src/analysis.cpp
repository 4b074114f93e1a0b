#include "svflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "svflow/errors.hpp"

namespace svflow {

namespace {

// Perfect matching between the columns of two adjacent slices, greedy by
// descending vector overlap; near-ties fall back to the closer log value.
std::vector<int> match_slices(const SvdSlice& a, const SvdSlice& b) {
  const int k = static_cast<int>(a.singular_values.size());
  const Eigen::MatrixXd u_overlap =
      (a.left_vectors.transpose() * b.left_vectors).cwiseAbs();
  const Eigen::MatrixXd v_overlap =
      (a.right_vectors.transpose() * b.right_vectors).cwiseAbs();

  struct Candidate {
    double score;
    double log_gap;
    int from;
    int to;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      candidates.push_back({u_overlap(i, j) * v_overlap(i, j),
                            std::abs(std::log(a.singular_values(i)) -
                                     std::log(b.singular_values(j))),
                            i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& lhs,
                                                     const Candidate& rhs) {
    return std::tie(rhs.score, lhs.log_gap, lhs.from, lhs.to) <
           std::tie(lhs.score, rhs.log_gap, rhs.from, rhs.to);
  });

  std::vector<int> match(static_cast<std::size_t>(k), -1);
  std::vector<bool> taken(static_cast<std::size_t>(k), false);
  int assigned = 0;
  for (const Candidate& c : candidates) {
    if (match[static_cast<std::size_t>(c.from)] >= 0 ||
        taken[static_cast<std::size_t>(c.to)]) {
      continue;
    }
    match[static_cast<std::size_t>(c.from)] = c.to;
    taken[static_cast<std::size_t>(c.to)] = true;
    if (++assigned == k) break;
  }
  return match;
}

}  // namespace

std::vector<Trajectory> track_trajectories(const SvfdDiagram& diagram) {
  if (diagram.slices.empty()) {
    throw InvalidInputError("diagram has no slices");
  }
  if (!diagram.has_vectors()) {
    throw InvalidInputError("diagram has no singular vectors to track with");
  }
  const int k = diagram.k_top;
  const std::size_t slice_count = diagram.slices.size();
  const Eigen::Index n = diagram.slices.front().left_vectors.rows();

  // Per-edge matchings, then chains seeded at the first slice's ranks.
  std::vector<std::vector<int>> edges;
  edges.reserve(slice_count - 1);
  for (std::size_t i = 0; i + 1 < slice_count; ++i) {
    edges.push_back(match_slices(diagram.slices[i], diagram.slices[i + 1]));
  }

  std::vector<Trajectory> trajectories(static_cast<std::size_t>(k));
  for (int start = 0; start < k; ++start) {
    Trajectory& t = trajectories[static_cast<std::size_t>(start)];
    t.indices.resize(slice_count);
    t.values.resize(static_cast<Eigen::Index>(slice_count));
    t.left_vectors.resize(n, static_cast<Eigen::Index>(slice_count));
    t.right_vectors.resize(n, static_cast<Eigen::Index>(slice_count));
    int col = start;
    for (std::size_t i = 0; i < slice_count; ++i) {
      if (i > 0) col = edges[i - 1][static_cast<std::size_t>(col)];
      const SvdSlice& slice = diagram.slices[i];
      t.indices[i] = col;
      t.values(static_cast<Eigen::Index>(i)) = slice.singular_values(col);
      t.left_vectors.col(static_cast<Eigen::Index>(i)) = slice.left_vectors.col(col);
      t.right_vectors.col(static_cast<Eigen::Index>(i)) = slice.right_vectors.col(col);
    }
    t.origin_rank = start + 1;
    t.terminal_rank = t.indices.back() + 1;
  }
  return trajectories;
}

double log_linearity_score(const Trajectory& t) {
  const Eigen::Index count = t.values.size();
  if (count < 1) throw InvalidInputError("trajectory is empty");
  if ((t.values.array() <= 0.0).any()) {
    throw InvalidInputError("trajectory values must be positive");
  }
  if (count <= 2) return 0.0;

  const Eigen::VectorXd y = t.values.array().log();
  Eigen::VectorXd x(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    x(i) = static_cast<double>(i) / static_cast<double>(count - 1);
  }
  const double x_mean = x.mean();
  const double y_mean = y.mean();
  const Eigen::VectorXd xc = x.array() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  const double slope = xc.dot(yc) / xc.squaredNorm();
  return (yc - slope * xc).cwiseAbs().maxCoeff();
}

std::optional<double> alignment_bound(double sigma, double x,
                                      double gap_eigenvalue, BoundSide side) {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw InvalidInputError("alignment bound needs sigma in (0, 1]");
  }
  if (!(gap_eigenvalue >= 0.0 && gap_eigenvalue < 1.0)) {
    throw InvalidInputError("gap eigenvalue must lie in [0, 1)");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidInputError("grid coordinate must lie in [0, 1]");
  }
  const double weight = side == BoundSide::left ? 1.0 - x : x;
  if (weight <= 0.0) return std::nullopt;
  return 1.0 - (1.0 - sigma * sigma) / (weight * (1.0 - gap_eigenvalue));
}

double refined_bound(double sigma, double x, double tail_moment,
                     BoundSide side) {
  if (!(tail_moment >= 0.0 && tail_moment < 1.0)) {
    throw InvalidInputError("tail moment must lie in [0, 1)");
  }
  const double weight = side == BoundSide::left ? 1.0 - x : x;
  if (weight <= 0.0) {
    throw InvalidInputError("refined bound undefined where the weight vanishes");
  }
  return 1.0 - (1.0 - sigma * sigma) / (weight * (1.0 - tail_moment));
}

std::optional<double> tail_second_moment(const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& eigenvalues,
                                         const Eigen::MatrixXd& eigenvectors) {
  const Eigen::Index k = eigenvalues.size();
  if (k < 2 || eigenvectors.cols() != k || eigenvectors.rows() != v.size()) {
    throw InvalidInputError("tail moment needs at least two matching modes");
  }
  const Eigen::VectorXd coeffs = eigenvectors.transpose() * v;
  double tail_mass = 0.0;
  double weighted = 0.0;
  for (Eigen::Index m = 1; m < k; ++m) {
    const double c2 = coeffs(m) * coeffs(m);
    tail_mass += c2;
    weighted += eigenvalues(m) * eigenvalues(m) * c2;
  }
  // Energy not captured by the supplied modes is attributed to the smallest
  // supplied eigenvalue; with the full basis this term vanishes.
  const double leftover = std::max(0.0, v.squaredNorm() - coeffs.squaredNorm());
  tail_mass += leftover;
  weighted += eigenvalues(k - 1) * eigenvalues(k - 1) * leftover;
  if (tail_mass < 1e-14) return std::nullopt;
  return weighted / tail_mass;
}

const char* to_string(Label label) {
  switch (label) {
    case Label::common: return "common";
    case Label::distinct: return "distinct";
    case Label::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Label classify(const TrajectoryReport& entry, double residual_threshold,
               double bound_threshold) {
  if (!(residual_threshold > 0.0) || !(bound_threshold > 0.0)) {
    throw InvalidInputError("classification thresholds must be positive");
  }
  if (entry.log_linear_residual > 10.0 * residual_threshold) {
    return Label::distinct;
  }
  const bool bounds_ok = !entry.min_positive_bound.has_value() ||
                         *entry.min_positive_bound >= bound_threshold;
  if (entry.log_linear_residual <= residual_threshold && bounds_ok) {
    return Label::common;
  }
  return Label::indeterminate;
}

CommonalityReport analyze_diagram(const SvfdDiagram& diagram,
                                  double residual_threshold,
                                  double bound_threshold) {
  const std::vector<Trajectory> trajectories = track_trajectories(diagram);
  const std::size_t slice_count = diagram.slices.size();

  // Boundary slices stand in for the endpoint matrices: at x=0 the left
  // singular vectors and values are A's eigenpairs, at x=1 the right ones
  // are B's.
  const SvdSlice& front = diagram.slices.front();
  const SvdSlice& back = diagram.slices.back();
  const bool gaps_known = diagram.k_top >= 2;
  const double gap_a = gaps_known ? front.singular_values(1) : 0.0;
  const double gap_b = gaps_known ? back.singular_values(1) : 0.0;
  const bool gap_a_valid = gaps_known && gap_a < 1.0;
  const bool gap_b_valid = gaps_known && gap_b < 1.0;

  CommonalityReport report;
  report.residual_threshold = residual_threshold;
  report.bound_threshold = bound_threshold;
  report.trajectories.reserve(trajectories.size());

  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    const Trajectory& t = trajectories[ti];
    TrajectoryReport entry;
    entry.id = static_cast<int>(ti) + 1;
    entry.origin_rank = t.origin_rank;
    entry.terminal_rank = t.terminal_rank;
    entry.origin_value = t.values(0);
    entry.terminal_value = t.values(t.values.size() - 1);
    entry.log_linear_residual = log_linearity_score(t);

    for (std::size_t i = 1; i + 1 < slice_count; ++i) {
      const double x = diagram.grid.points[i];
      const double sigma = t.values(static_cast<Eigen::Index>(i));
      BoundRow base{x, Bound::undefined(), Bound::undefined()};
      BoundRow refined{x, Bound::undefined(), Bound::undefined()};
      // The bounds only speak about the normalized regime sigma <= 1.
      if (sigma <= 1.0 + 1e-12) {
        const double s = std::min(sigma, 1.0);
        if (gap_a_valid) {
          if (auto b = alignment_bound(s, x, gap_a, BoundSide::left)) {
            base.bound_a = Bound::of(*b);
          }
          const auto rho_a = tail_second_moment(
              t.left_vectors.col(static_cast<Eigen::Index>(i)),
              front.singular_values, front.left_vectors);
          refined.bound_a = rho_a && *rho_a < 1.0
                                ? Bound::of(refined_bound(s, x, *rho_a,
                                                          BoundSide::left))
                                : (rho_a ? Bound::undefined() : Bound::exact());
        }
        if (gap_b_valid) {
          if (auto b = alignment_bound(s, x, gap_b, BoundSide::right)) {
            base.bound_b = Bound::of(*b);
          }
          const auto rho_b = tail_second_moment(
              t.right_vectors.col(static_cast<Eigen::Index>(i)),
              back.singular_values, back.right_vectors);
          refined.bound_b = rho_b && *rho_b < 1.0
                                ? Bound::of(refined_bound(s, x, *rho_b,
                                                          BoundSide::right))
                                : (rho_b ? Bound::undefined() : Bound::exact());
        }
      }
      entry.alignment_lower_bounds.push_back(base);
      entry.refined_bounds.push_back(refined);
    }

    double min_positive = std::numeric_limits<double>::infinity();
    for (const BoundRow& row : entry.alignment_lower_bounds) {
      for (const Bound* b : {&row.bound_a, &row.bound_b}) {
        if (b->is_value() && b->value > 0.0) {
          min_positive = std::min(min_positive, b->value);
        }
      }
    }
    if (std::isfinite(min_positive)) entry.min_positive_bound = min_positive;

    entry.label = classify(entry, residual_threshold, bound_threshold);
    report.trajectories.push_back(std::move(entry));
  }
  return report;
}

}  // namespace svflow
