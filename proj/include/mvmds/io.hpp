#pragma once

// Reading distance matrices and manifests, writing solve reports, and
// rendering 2-D embeddings / curves as standalone SVG.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mvmds/core.hpp"
#include "mvmds/solver.hpp"

namespace mvmds {

/// Comma-separated numeric rows; a first row whose first token is not a
/// number is treated as a header and skipped. Row count must equal column
/// count.
Matrix read_matrix_csv(const std::filesystem::path& path);
Matrix parse_matrix_csv(const std::string& text);

/// Writes with 17 significant digits.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// One integer per line; blank lines ignored.
std::vector<int> read_labels(const std::filesystem::path& path);

struct ProblemManifest {
  std::vector<std::filesystem::path> view_paths;
  std::vector<std::filesystem::path> mask_paths;  // empty or parallel to view_paths
  std::optional<std::filesystem::path> labels_path;
  SolverConfig solver;
};

/// JSON manifest: {"views": [...], "masks": [...], "labels": "...",
/// "solver": {"gamma", "dim", "tol", "max_iter", "init", "seed"}}. Relative
/// paths resolve against the manifest's directory.
ProblemManifest read_manifest(const std::filesystem::path& path);

MultiViewProblem load_problem(const ProblemManifest& manifest);

InitMode parse_init_mode(const std::string& name);
std::string to_string(InitMode mode);

nlohmann::json report_to_json(const SolveReport& report);
SolveReport report_from_json(const nlohmann::json& j);

void write_report_json(const SolveReport& report, const std::filesystem::path& path);
SolveReport read_report_json(const std::filesystem::path& path);

/// Writes text to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Rigidly (rotation, reflection, translation; no scaling) aligns source to
/// target in the least-squares sense.
Configuration procrustes_align(const Configuration& source, const Configuration& target);

struct ScatterSeries {
  Configuration config;
  std::string label;
  std::string color;
};

std::string render_scatter_svg(const std::vector<ScatterSeries>& series,
                               const std::vector<std::string>& point_labels = {},
                               const std::string& title = {});

/// Every series must be 2-D. point_labels, when given, annotate the points of
/// the last series.
void write_scatter_svg(const std::vector<ScatterSeries>& series,
                       const std::filesystem::path& path,
                       const std::vector<std::string>& point_labels = {},
                       const std::string& title = {});

struct CurveSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
  std::string color;
};

std::string render_line_svg(const std::vector<CurveSeries>& curves,
                            const std::string& x_label, const std::string& y_label,
                            const std::string& title = {});

// Colors for series in plots, cycled.
const std::vector<std::string>& series_palette();

}  // namespace mvmds
