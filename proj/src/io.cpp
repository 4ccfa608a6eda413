#include "mvmds/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mvmds {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    tokens.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return tokens;
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

Matrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tokens = split_commas(line);
    double value = 0.0;
    if (first_content) {
      first_content = false;
      if (!parse_double(tokens.front(), value)) continue;  // header row
    }
    std::vector<double> row;
    row.reserve(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      if (!parse_double(tokens[c], value)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                               std::to_string(c + 1) + ": '" + tokens[c] + "'");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ", column " +
                      std::to_string(std::min(row.size(), rows.front().size()) + 1) +
                      ": expected " + std::to_string(rows.front().size()) + " values, found " +
                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no numeric rows");
  const std::size_t cols = rows.front().size();
  if (rows.size() != cols) {
    throw Error(ErrorCode::NonSquare, std::to_string(rows.size()) + " rows and " +
                                          std::to_string(cols) + " columns");
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix read_matrix_csv(const fs::path& path) {
  try {
    return parse_matrix_csv(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FileNotFound || e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_matrix_csv(const Matrix& m, const fs::path& path) {
  std::string text;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) text += ',';
      text += format_g17(m(i, j));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<int> read_labels(const fs::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<int> labels;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string token = trim(line);
    if (token.empty()) continue;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) +
                                             ": '" + token + "' is not an integer");
    }
    labels.push_back(value);
  }
  return labels;
}

InitMode parse_init_mode(const std::string& name) {
  if (name == "classical") return InitMode::Classical;
  if (name == "random") return InitMode::Random;
  throw Error(ErrorCode::InvalidConfig, "unknown init mode '" + name + "'");
}

std::string to_string(InitMode mode) {
  return mode == InitMode::Classical ? "classical" : "random";
}

ProblemManifest read_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  ProblemManifest m;
  try {
    for (const auto& v : j.at("views")) m.view_paths.push_back(resolve(base, v.get<std::string>()));
    if (j.contains("masks")) {
      for (const auto& v : j.at("masks")) m.mask_paths.push_back(resolve(base, v.get<std::string>()));
    }
    if (j.contains("labels")) m.labels_path = resolve(base, j.at("labels").get<std::string>());
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      m.solver.gamma = s.value("gamma", m.solver.gamma);
      m.solver.p = s.value("dim", m.solver.p);
      m.solver.tol = s.value("tol", m.solver.tol);
      m.solver.max_iter = s.value("max_iter", m.solver.max_iter);
      m.solver.seed = s.value("seed", m.solver.seed);
      if (s.contains("init")) m.solver.init = parse_init_mode(s.at("init").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  if (m.view_paths.empty()) throw Error(ErrorCode::EmptyInput, path.string() + ": no views");
  if (!m.mask_paths.empty() && m.mask_paths.size() != m.view_paths.size()) {
    throw Error(ErrorCode::LengthMismatch, path.string() + ": masks and views differ in length");
  }
  return m;
}

MultiViewProblem load_problem(const ProblemManifest& manifest) {
  std::vector<DistanceView> views;
  for (std::size_t v = 0; v < manifest.view_paths.size(); ++v) {
    std::optional<Matrix> mask;
    if (!manifest.mask_paths.empty()) mask = read_matrix_csv(manifest.mask_paths[v]);
    try {
      views.push_back(validate_view(read_matrix_csv(manifest.view_paths[v]), mask));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::FileNotFound || e.code() == ErrorCode::ParseError) throw;
      throw Error(e.code(), manifest.view_paths[v].string() + ": " + e.what());
    }
  }
  return MultiViewProblem(std::move(views));
}

json report_to_json(const SolveReport& report) {
  json embedding = json::array();
  const Matrix& x = report.config_out.x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < x.cols(); ++k) row.push_back(x(i, k));
    embedding.push_back(std::move(row));
  }
  auto vec = [](const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  json trace = json::array();
  for (const auto& rec : report.trace) {
    trace.push_back({{"iter", rec.iter},
                     {"objective", rec.objective_value},
                     {"alpha", vec(rec.alpha.alpha())},
                     {"per_view_stress", vec(rec.per_view_stress)}});
  }
  return json{{"embedding", std::move(embedding)},
              {"weights", vec(report.weights_out.alpha())},
              {"trace", std::move(trace)},
              {"converged", report.converged},
              {"iterations", report.iterations_used},
              {"initial_objective", report.initial_objective}};
}

SolveReport report_from_json(const json& j) {
  auto vec = [](const json& a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
  };
  SolveReport report;
  try {
    const auto& emb = j.at("embedding");
    const Eigen::Index n = static_cast<Eigen::Index>(emb.size());
    const Eigen::Index p = n > 0 ? static_cast<Eigen::Index>(emb[0].size()) : 0;
    Matrix x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = emb[static_cast<std::size_t>(i)];
      if (static_cast<Eigen::Index>(row.size()) != p) {
        throw Error(ErrorCode::ParseError, "ragged embedding row " + std::to_string(i));
      }
      for (Eigen::Index k = 0; k < p; ++k) x(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    report.config_out = Configuration(std::move(x));
    report.weights_out = ViewWeights(vec(j.at("weights")));
    for (const auto& rec : j.at("trace")) {
      report.trace.push_back(IterationRecord{rec.at("iter").get<int>(),
                                             rec.at("objective").get<double>(),
                                             ViewWeights(vec(rec.at("alpha"))),
                                             vec(rec.at("per_view_stress"))});
    }
    report.converged = j.at("converged").get<bool>();
    report.iterations_used = j.at("iterations").get<int>();
    report.initial_objective = j.value("initial_objective", 0.0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  return report;
}

void write_report_json(const SolveReport& report, const fs::path& path) {
  write_text_file(path, report_to_json(report).dump(2) + "\n");
}

SolveReport read_report_json(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

Configuration procrustes_align(const Configuration& source, const Configuration& target) {
  if (source.n() != target.n() || source.p() != target.p()) {
    throw Error(ErrorCode::DimensionMismatch, "procrustes needs configurations of equal shape");
  }
  if (source.n() == 0) return source;
  const Eigen::RowVectorXd source_mean = source.x.colwise().mean();
  const Eigen::RowVectorXd target_mean = target.x.colwise().mean();
  const Matrix s = source.x.rowwise() - source_mean;
  const Matrix t = target.x.rowwise() - target_mean;
  Eigen::JacobiSVD<Matrix> svd(s.transpose() * t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix rotation = svd.matrixU() * svd.matrixV().transpose();
  return Configuration((s * rotation).rowwise() + target_mean);
}

}  // namespace mvmds
