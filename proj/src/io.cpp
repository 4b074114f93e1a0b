#include "svflow/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "svflow/errors.hpp"

namespace svflow {

std::string format_double(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericError("failed to format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  // Trim surrounding spaces; from_chars is strict.
  std::size_t begin = text.find_first_not_of(" \t\r");
  std::size_t end = text.find_last_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    throw IoError("empty numeric field");
  }
  text = text.substr(begin, end - begin + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError("malformed numeric field: '" + std::string(text) + "'");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return std::move(out).str();
}

void write_text_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failure on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string file_hash_hex(const std::filesystem::path& path) {
  const std::uint64_t hash = fnv1a64(read_text_file(path));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::size_t field = 0;
    while (field <= line.size()) {
      const std::size_t comma = std::min(line.find(',', field), line.size());
      row.push_back(parse_double(line.substr(field, comma - field)));
      field = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("CSV has no data rows");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw IoError("CSV rows have inconsistent field counts");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      std::string_view comment) {
  write_text_atomic(path, matrix_to_csv(m, comment));
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  return matrix_from_csv(read_text_file(path));
}

void write_point_cloud_csv(const std::filesystem::path& path,
                           const PointCloud& pc) {
  write_text_atomic(path, matrix_to_csv(pc.points));
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path) {
  PointCloud pc{read_matrix_csv(path)};
  pc.validate();
  return pc;
}

namespace {

nlohmann::ordered_json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const auto& item : arr) v(i++) = item.get<double>();
  return v;
}

nlohmann::ordered_json columns_to_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    arr.push_back(vector_to_json(m.col(c)));
  }
  return arr;
}

Eigen::MatrixXd columns_from_json(const nlohmann::json& arr) {
  if (arr.empty()) return {};
  const Eigen::Index cols = static_cast<Eigen::Index>(arr.size());
  const Eigen::Index rows = static_cast<Eigen::Index>(arr.front().size());
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index c = 0;
  for (const auto& col : arr) {
    if (static_cast<Eigen::Index>(col.size()) != rows) {
      throw IoError("ragged vector array in diagram JSON");
    }
    m.col(c++) = vector_from_json(col);
  }
  return m;
}

nlohmann::ordered_json bound_to_json(const Bound& b) {
  switch (b.state) {
    case Bound::State::value: return b.value;
    case Bound::State::exact_alignment: return "exact";
    case Bound::State::undefined: break;
  }
  return nullptr;
}

nlohmann::ordered_json bound_rows_to_json(const std::vector<BoundRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BoundRow& row : rows) {
    arr.push_back({{"x", row.x},
                   {"bound_a", bound_to_json(row.bound_a)},
                   {"bound_b", bound_to_json(row.bound_b)}});
  }
  return arr;
}

}  // namespace

nlohmann::ordered_json diagram_to_json(const SvfdDiagram& diagram,
                                       bool include_vectors) {
  nlohmann::ordered_json j;
  j["format"] = "svflow-diagram-v1";
  j["grid"] = {{"m_segments", diagram.grid.m_segments},
               {"points", diagram.grid.points}};
  j["k_top"] = diagram.k_top;
  nlohmann::ordered_json slices = nlohmann::ordered_json::array();
  for (const SvdSlice& slice : diagram.slices) {
    nlohmann::ordered_json s;
    s["x"] = slice.x;
    s["sigma"] = vector_to_json(slice.singular_values);
    if (include_vectors && slice.left_vectors.size() > 0) {
      s["left"] = columns_to_json(slice.left_vectors);
      s["right"] = columns_to_json(slice.right_vectors);
    }
    slices.push_back(std::move(s));
  }
  j["slices"] = std::move(slices);
  nlohmann::ordered_json meta;
  meta["n"] = diagram.meta.n;
  meta["epsilon_a"] = diagram.meta.epsilon_a
                          ? nlohmann::ordered_json(*diagram.meta.epsilon_a)
                          : nlohmann::ordered_json(nullptr);
  meta["epsilon_b"] = diagram.meta.epsilon_b
                          ? nlohmann::ordered_json(*diagram.meta.epsilon_b)
                          : nlohmann::ordered_json(nullptr);
  meta["input_hash_a"] = diagram.meta.input_hash_a;
  meta["input_hash_b"] = diagram.meta.input_hash_b;
  j["meta"] = std::move(meta);
  return j;
}

SvfdDiagram diagram_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "svflow-diagram-v1") {
      throw IoError("not a svflow diagram file");
    }
    SvfdDiagram diagram;
    diagram.grid.m_segments = j.at("grid").at("m_segments").get<int>();
    diagram.grid.points = j.at("grid").at("points").get<std::vector<double>>();
    diagram.k_top = j.at("k_top").get<int>();
    if (diagram.grid.points.size() !=
        static_cast<std::size_t>(diagram.grid.m_segments) + 1) {
      throw IoError("grid point count does not match m_segments");
    }
    for (const auto& s : j.at("slices")) {
      SvdSlice slice;
      slice.x = s.at("x").get<double>();
      slice.singular_values = vector_from_json(s.at("sigma"));
      if (static_cast<int>(slice.singular_values.size()) != diagram.k_top) {
        throw IoError("slice sigma count does not match k_top");
      }
      if (s.contains("left")) {
        slice.left_vectors = columns_from_json(s.at("left"));
        slice.right_vectors = columns_from_json(s.at("right"));
      }
      diagram.slices.push_back(std::move(slice));
    }
    if (diagram.slices.size() != diagram.grid.points.size()) {
      throw IoError("slice count does not match grid");
    }
    const auto& meta = j.at("meta");
    diagram.meta.n = meta.at("n").get<Eigen::Index>();
    if (!meta.at("epsilon_a").is_null()) {
      diagram.meta.epsilon_a = meta.at("epsilon_a").get<double>();
    }
    if (!meta.at("epsilon_b").is_null()) {
      diagram.meta.epsilon_b = meta.at("epsilon_b").get<double>();
    }
    diagram.meta.input_hash_a = meta.at("input_hash_a").get<std::string>();
    diagram.meta.input_hash_b = meta.at("input_hash_b").get<std::string>();
    return diagram;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed diagram JSON: ") + e.what());
  }
}

nlohmann::ordered_json report_to_json(const CommonalityReport& report) {
  nlohmann::ordered_json j;
  j["format"] = "svflow-report-v1";
  j["residual_threshold"] = report.residual_threshold;
  j["bound_threshold"] = report.bound_threshold;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TrajectoryReport& t : report.trajectories) {
    nlohmann::ordered_json entry;
    entry["id"] = t.id;
    entry["origin_rank"] = t.origin_rank;
    entry["terminal_rank"] = t.terminal_rank;
    entry["origin_value"] = t.origin_value;
    entry["terminal_value"] = t.terminal_value;
    entry["log_linear_residual"] = t.log_linear_residual;
    entry["alignment_lower_bounds"] = bound_rows_to_json(t.alignment_lower_bounds);
    entry["refined_bounds"] = bound_rows_to_json(t.refined_bounds);
    entry["min_positive_bound"] =
        t.min_positive_bound ? nlohmann::ordered_json(*t.min_positive_bound)
                             : nlohmann::ordered_json(nullptr);
    entry["label"] = to_string(t.label);
    arr.push_back(std::move(entry));
  }
  j["trajectories"] = std::move(arr);
  return j;
}

std::string report_summary_csv(const CommonalityReport& report) {
  std::string out =
      "trajectory,origin_rank,terminal_rank,log_linear_residual,"
      "min_positive_bound,label\n";
  for (const TrajectoryReport& t : report.trajectories) {
    out += std::to_string(t.id);
    out += ',';
    out += std::to_string(t.origin_rank);
    out += ',';
    out += std::to_string(t.terminal_rank);
    out += ',';
    out += format_double(t.log_linear_residual);
    out += ',';
    out += t.min_positive_bound ? format_double(*t.min_positive_bound) : "";
    out += ',';
    out += to_string(t.label);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json outcomes_to_json(const std::vector<OracleOutcome>& outcomes,
                                        std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["format"] = "svflow-verify-v1";
  j["seed"] = seed;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const OracleOutcome& o : outcomes) {
    arr.push_back({{"name", o.name},
                   {"trials", o.trials},
                   {"skipped", o.skipped},
                   {"worst_margin", o.worst_margin},
                   {"tolerance", o.tolerance},
                   {"passed", o.passed}});
    all = all && o.passed;
  }
  j["checks"] = std::move(arr);
  j["all_passed"] = all;
  return j;
}

}  // namespace svflow
