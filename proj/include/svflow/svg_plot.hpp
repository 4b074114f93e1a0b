#pragma once

#include <string>
#include <vector>

#include "svflow/analysis.hpp"
#include "svflow/interpolation.hpp"

namespace svflow {

// Straight overlay segment in log10 scale from (x=0, log10 v0) to (x=1, log10 v1).
struct OverlaySegment {
  double value_at_0 = 1.0;
  double value_at_1 = 1.0;
};

struct PlotOptions {
  int width = 900;
  int height = 600;
  double residual_threshold = kDefaultResidualThreshold;
  double bound_threshold = kDefaultBoundThreshold;
  std::vector<OverlaySegment> overlay;
};

// Self-contained SVG of the diagram: decade-scaled vertical axis, one
// polyline per trajectory when singular vectors are present (common
// trajectories highlighted, distinct ones colored), per-rank polylines
// otherwise, plus optional dashed overlay segments with square end markers.
std::string render_svfd_svg(const SvfdDiagram& diagram, const PlotOptions& options);

}  // namespace svflow
