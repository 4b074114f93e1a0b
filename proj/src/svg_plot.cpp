#include "svflow/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svflow/errors.hpp"
#include "svflow/io.hpp"

namespace svflow {

namespace {

struct Frame {
  double left, right, top, bottom;
  double log_min, log_max;

  double px(double x) const { return left + x * (right - left); }
  double py(double logv) const {
    return bottom - (logv - log_min) / (log_max - log_min) * (bottom - top);
  }
};

std::string fmt(double v) {
  // Two decimals are plenty for pixel coordinates and keep files small.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void polyline(std::string& svg, const std::vector<double>& xs,
              const std::vector<double>& logs, const Frame& f,
              const std::string& color, double width, bool dashed) {
  svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
         fmt(width) + "\"";
  if (dashed) svg += " stroke-dasharray=\"6,4\"";
  svg += " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += fmt(f.px(xs[i])) + "," + fmt(f.py(logs[i]));
  }
  svg += "\"/>\n";
}

}  // namespace

std::string render_svfd_svg(const SvfdDiagram& diagram,
                            const PlotOptions& options) {
  if (diagram.slices.empty()) {
    throw InvalidInputError("cannot plot an empty diagram");
  }
  const std::vector<double>& xs = diagram.grid.points;

  // Gather curves: tracked trajectories when vectors are available,
  // per-rank value rows otherwise.
  std::vector<std::vector<double>> curves;
  std::vector<Label> labels;
  if (diagram.has_vectors()) {
    const CommonalityReport report = analyze_diagram(
        diagram, options.residual_threshold, options.bound_threshold);
    const std::vector<Trajectory> trajectories = track_trajectories(diagram);
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
      std::vector<double> logs(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        logs[i] = std::log10(
            trajectories[t].values(static_cast<Eigen::Index>(i)));
      }
      curves.push_back(std::move(logs));
      labels.push_back(report.trajectories[t].label);
    }
  } else {
    for (int k = 0; k < diagram.k_top; ++k) {
      std::vector<double> logs(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        logs[i] = std::log10(diagram.slices[i].singular_values(k));
      }
      curves.push_back(std::move(logs));
      labels.push_back(Label::indeterminate);
    }
  }

  double log_min = 0.0, log_max = 0.0;
  bool first = true;
  for (const auto& curve : curves) {
    for (double v : curve) {
      if (first) {
        log_min = log_max = v;
        first = false;
      }
      log_min = std::min(log_min, v);
      log_max = std::max(log_max, v);
    }
  }
  for (const OverlaySegment& seg : options.overlay) {
    log_min = std::min({log_min, std::log10(seg.value_at_0),
                        std::log10(seg.value_at_1)});
    log_max = std::max({log_max, std::log10(seg.value_at_0),
                        std::log10(seg.value_at_1)});
  }
  if (log_max - log_min < 1e-9) {
    log_min -= 0.5;
    log_max += 0.5;
  }
  const double pad = 0.04 * (log_max - log_min);

  Frame f{60.0, options.width - 20.0, 20.0, options.height - 45.0,
          log_min - pad, log_max + pad};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes.
  svg += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.bottom) +
         "\" x2=\"" + fmt(f.right) + "\" y2=\"" + fmt(f.bottom) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.top) + "\" x2=\"" +
         fmt(f.left) + "\" y2=\"" + fmt(f.bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = i / 5.0;
    svg += "<line x1=\"" + fmt(f.px(x)) + "\" y1=\"" + fmt(f.bottom) +
           "\" x2=\"" + fmt(f.px(x)) + "\" y2=\"" + fmt(f.bottom + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(f.px(x)) + "\" y=\"" + fmt(f.bottom + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + fmt(x) + "</text>\n";
  }
  const int decade_lo = static_cast<int>(std::ceil(f.log_min));
  const int decade_hi = static_cast<int>(std::floor(f.log_max));
  for (int d = decade_lo; d <= decade_hi; ++d) {
    svg += "<line x1=\"" + fmt(f.left - 5) + "\" y1=\"" + fmt(f.py(d)) +
           "\" x2=\"" + fmt(f.left) + "\" y2=\"" + fmt(f.py(d)) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(f.left - 8) + "\" y=\"" + fmt(f.py(d) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">1e" + std::to_string(d) +
           "</text>\n";
    svg += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.py(d)) +
           "\" x2=\"" + fmt(f.right) + "\" y2=\"" + fmt(f.py(d)) +
           "\" stroke=\"#eeeeee\"/>\n";
  }
  svg += "<text x=\"" + fmt((f.left + f.right) / 2) + "\" y=\"" +
         fmt(f.bottom + 38) +
         "\" font-size=\"13\" text-anchor=\"middle\">interpolation parameter "
         "x</text>\n";

  // Curves, least interesting first so highlights sit on top.
  for (Label pass : {Label::indeterminate, Label::distinct, Label::common}) {
    for (std::size_t t = 0; t < curves.size(); ++t) {
      if (labels[t] != pass) continue;
      std::string color = "#b5bcc4";
      double width = 1.2;
      if (labels[t] == Label::common) {
        color = "#e0a10f";
        width = 2.5;
      } else if (labels[t] == Label::distinct) {
        color = "#3f6ea5";
        width = 1.4;
      }
      polyline(svg, xs, curves[t], f, color, width, false);
    }
  }

  for (const OverlaySegment& seg : options.overlay) {
    const std::vector<double> ox{0.0, 1.0};
    const std::vector<double> ologs{std::log10(seg.value_at_0),
                                    std::log10(seg.value_at_1)};
    polyline(svg, ox, ologs, f, "#2b5fd9", 1.3, true);
    for (int side = 0; side < 2; ++side) {
      svg += "<rect x=\"" + fmt(f.px(ox[side]) - 3.5) + "\" y=\"" +
             fmt(f.py(ologs[side]) - 3.5) +
             "\" width=\"7\" height=\"7\" fill=\"none\" "
             "stroke=\"#2b5fd9\" stroke-width=\"1.3\"/>\n";
    }
  }

  if (diagram.has_vectors()) {
    svg += "<text x=\"" + fmt(f.right) + "\" y=\"14\" font-size=\"12\" "
           "text-anchor=\"end\">common: gold, distinct: blue, "
           "indeterminate: gray</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace svflow
