#pragma once

#include <optional>
#include <vector>

#include "svflow/interpolation.hpp"

namespace svflow {

// One singular-value curve followed across the grid by singular-vector
// continuity. Ranks are 1-based positions in the boundary spectra.
struct Trajectory {
  std::vector<int> indices;      // column picked at each slice
  Eigen::VectorXd values;        // sigma at each grid point
  Eigen::MatrixXd left_vectors;  // n x (M+1)
  Eigen::MatrixXd right_vectors;
  int origin_rank = 1;
  int terminal_rank = 1;
};

// Chains the K triplets of adjacent slices into K trajectories. Each edge is
// a perfect matching chosen greedily by descending overlap
// |<u_i, u_{i+1}>| * |<v_i, v_{i+1}>|, ties broken by the closer log value.
std::vector<Trajectory> track_trajectories(const SvfdDiagram& diagram);

// Max absolute residual of the least-squares affine fit of log(values)
// against the implicit uniform grid on [0, 1].
double log_linearity_score(const Trajectory& t);

// Which boundary matrix a bound speaks about: the left singular vector is
// compared against the top eigenvector of the x=0 matrix (weight 1-x), the
// right one against the x=1 matrix (weight x).
enum class BoundSide { left, right };

// Lower bound on the squared overlap between a principal singular vector and
// the corresponding leading eigenvector:
//   1 - (1 - sigma^2) / (weight * (1 - gap_eigenvalue)).
// May be negative (vacuous); that value is returned as-is. nullopt signals
// the vacuous endpoint case where the side's weight vanishes.
std::optional<double> alignment_bound(double sigma, double x,
                                      double gap_eigenvalue, BoundSide side);

// Sharper variant using the tail second moment rho instead of the gap:
//   1 - (1 - sigma^2) / (weight * (1 - rho)).
double refined_bound(double sigma, double x, double tail_moment,
                     BoundSide side);

// Second moment of the tail spectrum: the mu_m^2-weighted average of the
// vector's energy outside the leading eigenvector,
//   rho = sum_{m>=2} mu_m^2 c_m^2 / sum_{m>=2} c_m^2,   c_m = <v, b_m>.
// When only the top K < n modes are supplied, the unattributed remainder of
// |v|^2 is counted at the smallest supplied eigenvalue, which can only
// increase rho (the resulting bound stays valid). nullopt when the tail mass
// is below 1e-14: v aligns with b_1 exactly.
std::optional<double> tail_second_moment(const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& eigenvalues,
                                         const Eigen::MatrixXd& eigenvectors);

enum class Label { common, distinct, indeterminate };
const char* to_string(Label label);

// A bound entry: a numeric lower bound, the exact-alignment signal (zero
// tail mass, overlap is 1), or undefined (not computable from this diagram).
struct Bound {
  enum class State { undefined, value, exact_alignment };
  State state = State::undefined;
  double value = 0.0;

  static Bound undefined() { return {}; }
  static Bound exact() { return {State::exact_alignment, 1.0}; }
  static Bound of(double v) { return {State::value, v}; }
  bool is_value() const { return state == State::value; }
};

struct BoundRow {
  double x = 0.0;
  Bound bound_a;  // left vector vs top eigenvector of the x=0 matrix
  Bound bound_b;  // right vector vs top eigenvector of the x=1 matrix
};

struct TrajectoryReport {
  int id = 0;
  int origin_rank = 1;
  int terminal_rank = 1;
  double origin_value = 0.0;
  double terminal_value = 0.0;
  double log_linear_residual = 0.0;
  std::vector<BoundRow> alignment_lower_bounds;  // interior grid points
  std::vector<BoundRow> refined_bounds;
  std::optional<double> min_positive_bound;
  Label label = Label::indeterminate;
};

struct CommonalityReport {
  double residual_threshold = 0.0;
  double bound_threshold = 0.0;
  std::vector<TrajectoryReport> trajectories;
};

// common: residual <= residual_threshold and every positive alignment bound
//         observation is at least bound_threshold (no positive bounds at all
//         leaves the bound condition vacuously satisfied);
// distinct: residual > 10 * residual_threshold;
// indeterminate otherwise.
Label classify(const TrajectoryReport& entry, double residual_threshold,
               double bound_threshold);

// Tracks, scores, evaluates bounds from the diagram's own boundary slices,
// and labels every trajectory. Requires singular vectors in the diagram.
CommonalityReport analyze_diagram(const SvfdDiagram& diagram,
                                  double residual_threshold,
                                  double bound_threshold);

inline constexpr double kDefaultResidualThreshold = 1e-3;
inline constexpr double kDefaultBoundThreshold = 0.5;

}  // namespace svflow
