#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "svflow/analysis.hpp"
#include "svflow/cylinder.hpp"
#include "svflow/errors.hpp"
#include "svflow/interpolation.hpp"
#include "svflow/io.hpp"
#include "svflow/kernel.hpp"
#include "svflow/oracles.hpp"
#include "svflow/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace svflow;

namespace {

struct GlobalOpts {
  std::string output_dir = ".";
  bool quiet = false;
  std::uint64_t seed = 0;
};

fs::path out_path(const GlobalOpts& g, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  fs::create_directories(g.output_dir);
  return fs::path(g.output_dir) / p;
}

void note(const GlobalOpts& g, const std::string& message) {
  if (!g.quiet) std::cout << message << "\n";
}

int run_synth(const GlobalOpts& g, const CylinderParams& params,
              const std::string& cloud1_name, const std::string& cloud2_name,
              const std::string& manifest_name) {
  const auto [cloud1, cloud2] = sample_cylinders(params);
  const fs::path p1 = out_path(g, cloud1_name);
  const fs::path p2 = out_path(g, cloud2_name);
  write_point_cloud_csv(p1, cloud1);
  write_point_cloud_csv(p2, cloud2);

  nlohmann::ordered_json manifest;
  manifest["format"] = "svflow-synth-v1";
  manifest["n"] = params.n;
  manifest["l1"] = params.l1;
  manifest["p1"] = params.p1;
  manifest["l2"] = params.l2;
  manifest["p2"] = params.p2;
  manifest["seed"] = params.seed;
  manifest["rng"] = "mt19937_64; uniform = (u64 >> 11) * 2^-53; "
                    "per point: angle1, angle2, height";
  manifest["cloud1"] = cloud1_name;
  manifest["cloud2"] = cloud2_name;
  const fs::path pm = out_path(g, manifest_name);
  write_text_atomic(pm, manifest.dump(2) + "\n");

  note(g, "wrote " + p1.string());
  note(g, "wrote " + p2.string());
  note(g, "wrote " + pm.string());
  return 0;
}

int run_kernel(const GlobalOpts& g, const std::string& cloud_path,
               double epsilon, bool raw, const std::string& output_name) {
  const PointCloud cloud = read_point_cloud_csv(cloud_path);
  if (epsilon <= 0.0) epsilon = epsilon_heuristic(cloud);
  SpdMatrix kernel = gaussian_kernel(cloud, epsilon);
  if (!raw) kernel = normalize_kernel(kernel);
  const fs::path out = out_path(g, output_name);
  write_matrix_csv(out, kernel.matrix());
  note(g, "epsilon " + format_double(epsilon));
  note(g, "wrote " + out.string());
  return 0;
}

struct SvfdOpts {
  std::string cloud1, cloud2;
  double epsilon1 = 0.0, epsilon2 = 0.0;  // 0 = heuristic
  int m_segments = 51;
  int k_top = 12;
  bool no_vectors = false;
  std::string diagram_name = "svfd.json";
  std::string log_csv_name = "svfd_log_sigma.csv";
};

int run_svfd(const GlobalOpts& g, const SvfdOpts& o) {
  const PointCloud cloud1 = read_point_cloud_csv(o.cloud1);
  const PointCloud cloud2 = read_point_cloud_csv(o.cloud2);
  if (cloud1.count() != cloud2.count()) {
    throw InvalidInputError(
        "aligned point clouds required: row counts differ (" +
        std::to_string(cloud1.count()) + " vs " +
        std::to_string(cloud2.count()) + ")");
  }
  const double eps1 = o.epsilon1 > 0.0 ? o.epsilon1 : epsilon_heuristic(cloud1);
  const double eps2 = o.epsilon2 > 0.0 ? o.epsilon2 : epsilon_heuristic(cloud2);
  const SpdMatrix a = normalize_kernel(gaussian_kernel(cloud1, eps1));
  const SpdMatrix b = normalize_kernel(gaussian_kernel(cloud2, eps2));

  SvfdDiagram diagram = compute_svfd(a, b, o.m_segments, o.k_top);
  diagram.meta.epsilon_a = eps1;
  diagram.meta.epsilon_b = eps2;
  diagram.meta.input_hash_a = file_hash_hex(o.cloud1);
  diagram.meta.input_hash_b = file_hash_hex(o.cloud2);

  const fs::path diagram_path = out_path(g, o.diagram_name);
  write_text_atomic(diagram_path,
                    diagram_to_json(diagram, !o.no_vectors).dump() + "\n");
  note(g, "wrote " + diagram_path.string());

  const std::vector<Trajectory> trajectories = track_trajectories(diagram);
  Eigen::MatrixXd log_sigma(static_cast<Eigen::Index>(trajectories.size()),
                            static_cast<Eigen::Index>(diagram.slices.size()));
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    log_sigma.row(static_cast<Eigen::Index>(t)) =
        trajectories[t].values.array().log().transpose();
  }
  std::string comment = "log singular values; rows = tracked trajectories "
                        "seeded at x=0 ranks 1..K; columns = grid x_i = i/" +
                        std::to_string(o.m_segments);
  const fs::path csv_path = out_path(g, o.log_csv_name);
  write_matrix_csv(csv_path, log_sigma, comment);
  note(g, "wrote " + csv_path.string());
  return 0;
}

int run_analyze(const GlobalOpts& g, const std::string& diagram_path,
                double residual_threshold, double bound_threshold,
                const std::string& report_name,
                const std::string& summary_name) {
  const SvfdDiagram diagram =
      diagram_from_json(nlohmann::json::parse(read_text_file(diagram_path)));
  if (!diagram.has_vectors()) {
    throw InvalidInputError(
        "diagram has no singular vectors (written with --no-vectors); "
        "analysis needs them, re-run svfd without --no-vectors");
  }
  const CommonalityReport report =
      analyze_diagram(diagram, residual_threshold, bound_threshold);

  const fs::path report_path = out_path(g, report_name);
  write_text_atomic(report_path, report_to_json(report).dump(2) + "\n");
  const fs::path summary_path = out_path(g, summary_name);
  write_text_atomic(summary_path, report_summary_csv(report));

  int common = 0, distinct = 0, indeterminate = 0;
  for (const TrajectoryReport& t : report.trajectories) {
    if (t.label == Label::common) ++common;
    if (t.label == Label::distinct) ++distinct;
    if (t.label == Label::indeterminate) ++indeterminate;
  }
  note(g, "trajectories: " + std::to_string(common) + " common, " +
              std::to_string(distinct) + " distinct, " +
              std::to_string(indeterminate) + " indeterminate");
  note(g, "wrote " + report_path.string());
  note(g, "wrote " + summary_path.string());
  return 0;
}

struct PlotOpts {
  std::string diagram;
  std::string output_name = "svfd.svg";
  int width = 900;
  int height = 600;
  double residual_threshold = kDefaultResidualThreshold;
  double bound_threshold = kDefaultBoundThreshold;
  bool overlay = false;
  double overlay_epsilon1 = 0.0, overlay_epsilon2 = 0.0;
  double overlay_l1 = 2.0, overlay_p1 = 1.25;
  double overlay_l2 = 2.0, overlay_p2 = 3.0;
  int overlay_kz_min = 1, overlay_kz_max = 3;
};

int run_plot(const GlobalOpts& g, const PlotOpts& o) {
  const SvfdDiagram diagram =
      diagram_from_json(nlohmann::json::parse(read_text_file(o.diagram)));
  PlotOptions options;
  options.width = o.width;
  options.height = o.height;
  options.residual_threshold = o.residual_threshold;
  options.bound_threshold = o.bound_threshold;
  if (o.overlay) {
    if (!(o.overlay_epsilon1 > 0.0) || !(o.overlay_epsilon2 > 0.0)) {
      throw InvalidInputError(
          "--overlay needs --overlay-epsilon1 and --overlay-epsilon2 (the "
          "eigenvalue transform scale is independent of the kernel scale)");
    }
    const auto spec1 = analytic_cylinder_spectrum(o.overlay_l1, o.overlay_p1,
                                                  0, o.overlay_kz_max);
    const auto spec2 = analytic_cylinder_spectrum(o.overlay_l2, o.overlay_p2,
                                                  0, o.overlay_kz_max);
    for (int kz = o.overlay_kz_min; kz <= o.overlay_kz_max; ++kz) {
      double lambda1 = 0.0, lambda2 = 0.0;
      for (const AnalyticEigenvalue& e : spec1) {
        if (e.k_z == kz && e.k_angular == 0) lambda1 = e.value;
      }
      for (const AnalyticEigenvalue& e : spec2) {
        if (e.k_z == kz && e.k_angular == 0) lambda2 = e.value;
      }
      options.overlay.push_back(
          {eigenvalue_transform(lambda1, o.overlay_epsilon1),
           eigenvalue_transform(lambda2, o.overlay_epsilon2)});
    }
  }
  const fs::path out = out_path(g, o.output_name);
  write_text_atomic(out, render_svfd_svg(diagram, options));
  note(g, "wrote " + out.string());
  return 0;
}

struct VerifyOpts {
  std::string report_name = "verify_report.json";
  int mcintosh_trials = 1000;
  int identifiability_trials = 50;
  int stability_trials = 100;
  int refinement_trials = 100;
};

int run_verify(const GlobalOpts& g, const VerifyOpts& o) {
  const std::vector<OracleOutcome> outcomes = {
      check_mcintosh(6, o.mcintosh_trials, g.seed),
      check_identifiability(10, o.identifiability_trials, g.seed),
      check_stability(30, o.stability_trials, g.seed),
      check_refinement(30, o.refinement_trials, g.seed),
  };
  bool all = true;
  for (const OracleOutcome& o : outcomes) {
    std::cout << (o.passed ? "PASS " : "FAIL ") << o.name
              << " (trials=" << o.trials << ", skipped=" << o.skipped
              << ", worst_margin=" << format_double(o.worst_margin) << ")\n";
    all = all && o.passed;
  }
  const fs::path report_path = out_path(g, o.report_name);
  write_text_atomic(report_path, outcomes_to_json(outcomes, g.seed).dump(2) + "\n");
  note(g, "wrote " + report_path.string());
  if (!all) throw NumericError("verification failed");
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"singular value flow diagrams of interpolated SPD kernel pairs"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--output-dir", g.output_dir, "directory for output files");
  app.add_flag("--quiet", g.quiet, "suppress progress messages");
  app.add_option("--seed", g.seed, "random seed (synth, verify)");

  // synth
  CylinderParams params;
  std::string cloud1_name = "cloud1.csv";
  std::string cloud2_name = "cloud2.csv";
  std::string manifest_name = "synth_manifest.json";
  CLI::App* synth = app.add_subcommand(
      "synth", "sample the paired-cylinder benchmark clouds");
  synth->add_option("--n", params.n, "number of sample points");
  synth->add_option("--l1", params.l1, "height scale of cylinder 1");
  synth->add_option("--p1", params.p1, "perimeter of cylinder 1");
  synth->add_option("--l2", params.l2, "height scale of cylinder 2");
  synth->add_option("--p2", params.p2, "perimeter of cylinder 2");
  synth->add_option("--cloud1", cloud1_name, "output file for cloud 1");
  synth->add_option("--cloud2", cloud2_name, "output file for cloud 2");
  synth->add_option("--manifest", manifest_name, "output manifest file");

  // kernel
  std::string kernel_cloud;
  double kernel_epsilon = 0.0;
  bool kernel_raw = false;
  std::string kernel_output = "kernel.csv";
  CLI::App* kernel = app.add_subcommand(
      "kernel", "build a (normalized) Gaussian kernel from a point cloud");
  kernel->add_option("cloud", kernel_cloud, "point cloud CSV")->required();
  kernel->add_option("--epsilon", kernel_epsilon,
                     "kernel scale (default: median squared distance)");
  kernel->add_flag("--raw", kernel_raw, "skip the diffusion normalization");
  kernel->add_option("--output", kernel_output, "output matrix CSV");

  // svfd
  SvfdOpts svfd_opts;
  CLI::App* svfd = app.add_subcommand(
      "svfd", "compute the singular value flow diagram of two aligned clouds");
  svfd->add_option("cloud1", svfd_opts.cloud1, "first point cloud CSV")->required();
  svfd->add_option("cloud2", svfd_opts.cloud2, "second point cloud CSV")->required();
  svfd->add_option("--epsilon1", svfd_opts.epsilon1, "kernel scale for cloud 1");
  svfd->add_option("--epsilon2", svfd_opts.epsilon2, "kernel scale for cloud 2");
  svfd->add_option("--m-segments", svfd_opts.m_segments, "grid segments M");
  svfd->add_option("--k-top", svfd_opts.k_top, "singular values per grid point");
  svfd->add_flag("--no-vectors", svfd_opts.no_vectors,
                 "omit singular vectors from the diagram JSON");
  svfd->add_option("--diagram", svfd_opts.diagram_name, "output diagram JSON");
  svfd->add_option("--log-csv", svfd_opts.log_csv_name,
                   "output CSV of log singular values per trajectory");

  // analyze
  std::string analyze_diagram_path;
  double residual_threshold = kDefaultResidualThreshold;
  double bound_threshold = kDefaultBoundThreshold;
  std::string report_name = "report.json";
  std::string summary_name = "report_summary.csv";
  CLI::App* analyze = app.add_subcommand(
      "analyze", "label trajectories as common or distinct");
  analyze->add_option("diagram", analyze_diagram_path, "diagram JSON")->required();
  analyze->add_option("--residual-threshold", residual_threshold,
                      "max log-linearity residual for a common label");
  analyze->add_option("--bound-threshold", bound_threshold,
                      "min positive alignment bound for a common label");
  analyze->add_option("--report", report_name, "output report JSON");
  analyze->add_option("--summary", summary_name, "output summary CSV");

  // plot
  PlotOpts plot_opts;
  CLI::App* plot = app.add_subcommand("plot", "render the diagram as SVG");
  plot->add_option("diagram", plot_opts.diagram, "diagram JSON")->required();
  plot->add_option("--output", plot_opts.output_name, "output SVG file");
  plot->add_option("--width", plot_opts.width, "SVG width in pixels");
  plot->add_option("--height", plot_opts.height, "SVG height in pixels");
  plot->add_option("--residual-threshold", plot_opts.residual_threshold,
                   "classification threshold used for highlighting");
  plot->add_option("--bound-threshold", plot_opts.bound_threshold,
                   "classification threshold used for highlighting");
  plot->add_flag("--overlay", plot_opts.overlay,
                 "draw log-linear segments between transformed analytic "
                 "cylinder eigenvalues");
  plot->add_option("--overlay-epsilon1", plot_opts.overlay_epsilon1,
                   "eigenvalue transform scale, left boundary");
  plot->add_option("--overlay-epsilon2", plot_opts.overlay_epsilon2,
                   "eigenvalue transform scale, right boundary");
  plot->add_option("--overlay-l1", plot_opts.overlay_l1, "height scale 1");
  plot->add_option("--overlay-p1", plot_opts.overlay_p1, "perimeter 1");
  plot->add_option("--overlay-l2", plot_opts.overlay_l2, "height scale 2");
  plot->add_option("--overlay-p2", plot_opts.overlay_p2, "perimeter 2");
  plot->add_option("--overlay-kz-min", plot_opts.overlay_kz_min,
                   "smallest axial mode index");
  plot->add_option("--overlay-kz-max", plot_opts.overlay_kz_max,
                   "largest axial mode index");

  // verify
  VerifyOpts verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the randomized numerical checks");
  verify->add_option("--report", verify_opts.report_name, "output report JSON");
  verify->add_option("--mcintosh-trials", verify_opts.mcintosh_trials,
                     "trial count for the matrix inequality check");
  verify->add_option("--identifiability-trials",
                     verify_opts.identifiability_trials,
                     "trial count for the identifiability check");
  verify->add_option("--stability-trials", verify_opts.stability_trials,
                     "trial count for the alignment bound check");
  verify->add_option("--refinement-trials", verify_opts.refinement_trials,
                     "trial count for the refinement dominance check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (synth->parsed()) {
    params.seed = g.seed;
    return run_synth(g, params, cloud1_name, cloud2_name, manifest_name);
  }
  if (kernel->parsed()) {
    return run_kernel(g, kernel_cloud, kernel_epsilon, kernel_raw, kernel_output);
  }
  if (svfd->parsed()) return run_svfd(g, svfd_opts);
  if (analyze->parsed()) {
    return run_analyze(g, analyze_diagram_path, residual_threshold,
                       bound_threshold, report_name, summary_name);
  }
  if (plot->parsed()) return run_plot(g, plot_opts);
  if (verify->parsed()) return run_verify(g, verify_opts);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
