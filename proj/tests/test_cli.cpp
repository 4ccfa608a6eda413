#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mvmds/cli.hpp"
#include "mvmds/io.hpp"
#include "mvmds/synth.hpp"

using namespace mvmds;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("mvmds_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int count(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

Matrix euclidean(const Matrix& pts) {
  Matrix d(pts.rows(), pts.rows());
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.rows(); ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
  return d;
}

// Two views of three tight, far-apart clusters.
fs::path separable_manifest(const TempDir& dir, int n_labels_written = 30) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.05);
  Matrix pts(30, 2);
  std::string labels;
  for (int i = 0; i < 30; ++i) {
    const int c = i % 3;
    pts.row(i) << 20.0 * c + g(rng), (c == 1 ? 20.0 : 0.0) + g(rng);
    if (i < n_labels_written) labels += std::to_string(c) + "\n";
  }
  write_matrix_csv(euclidean(pts), dir / "a.csv");
  write_matrix_csv(1.1 * euclidean(pts), dir / "b.csv");
  write(dir / "labels.txt", labels);
  write(dir / "m.json", R"({"views": ["a.csv", "b.csv"], "labels": "labels.txt"})");
  return dir / "m.json";
}

fs::path city_manifest(const TempDir& dir, std::uint64_t seed) {
  const MultiViewProblem p = make_city_problem(default_city_specs(seed));
  std::string views;
  for (int v = 0; v < p.m(); ++v) {
    const std::string name = "view" + std::to_string(v + 1) + ".csv";
    write_matrix_csv(p.view(v).delta(), dir / name);
    views += (v ? ", \"" : "\"") + name + "\"";
  }
  write(dir / "cities.json", "{\"views\": [" + views + "]}");
  return dir / "cities.json";
}

}  // namespace

TEST(CliSolve, SingleViewWeightIsOne) {
  TempDir dir;
  write_matrix_csv(six_cities().delta(), dir / "t.csv");
  write(dir / "m.json", R"({"views": ["t.csv"]})");
  const CliResult r = run({"solve", (dir / "m.json").string(), "--out", (dir / "r.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_report_json(dir / "r.json").weights_out.alpha(), Vector::Ones(1));
  EXPECT_NE(r.out.find("weights: 1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("objective: "), std::string::npos);
}

TEST(CliSolve, CityManifestConvergesWithinFiftyIterations) {
  TempDir dir;
  const CliResult r = run({"solve", city_manifest(dir, 0).string(), "--gamma", "5", "--dim", "2", "--out",
                     (dir / "r.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const SolveReport report = read_report_json(dir / "r.json");
  EXPECT_TRUE(report.converged);
  EXPECT_LE(report.iterations_used, 50);
  EXPECT_EQ(report.weights_out.size(), 4u);
}

TEST(CliSolve, FlagsOverrideManifest) {
  TempDir dir;
  write_matrix_csv(six_cities().delta(), dir / "t.csv");
  write(dir / "m.json", R"({"views": ["t.csv"], "solver": {"dim": 2, "max_iter": 100}})");
  const CliResult r = run({"solve", (dir / "m.json").string(), "--dim", "3", "--max-iter", "2", "--out",
                     (dir / "r.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const SolveReport report = read_report_json(dir / "r.json");
  EXPECT_EQ(report.config_out.p(), 3);
  EXPECT_LE(report.iterations_used, 2);
}

TEST(CliSolve, Failures) {
  TempDir dir;
  write_matrix_csv(six_cities().delta(), dir / "t.csv");
  write(dir / "m.json", R"({"views": ["t.csv"]})");
  CliResult r = run({"solve", (dir / "m.json").string(), "--gamma", "0.5", "--out", (dir / "r.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("GammaBelowOne"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
  r = run({"solve", (dir / "missing.json").string(), "--out", (dir / "r.json").string()});
  EXPECT_EQ(r.code, 1);
  r = run({"solve", (dir / "m.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
}

TEST(CliSynthCities, MethodListAndFiles) {
  TempDir dir;
  const CliResult r = run({"synth-cities", "--trials", "3", "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = slurp(dir / "summary.csv");
  std::vector<std::string> methods;
  std::istringstream in(summary);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) methods.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(methods, (std::vector<std::string>{"View1", "View2", "View3", "View4", "LC_MDS",
                                                "MVMDS@1.5", "MVMDS@5", "MVMDS@10"}));
  for (const char* f : {"trials.csv", "cities.csv", "weights_vs_gamma.csv", "weights_vs_gamma.svg",
                        "convergence.csv", "convergence.svg", "trial0_view1.svg", "trial0_lc_mds.svg",
                        "trial0_mvmds_5.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const std::string fig = slurp(dir / "trial0_mvmds_5.svg");
  EXPECT_EQ(count(fig, "<circle"), 12);
  EXPECT_EQ(count(fig, "class=\"point-label\""), 6);
}

TEST(CliSynthCities, DeterministicAndBeatsLcOnMedian) {
  TempDir a, b;
  ASSERT_EQ(run({"synth-cities", "--trials", "100", "--seed", "7", "--out-dir", a.path().string()}).code, 0);
  ASSERT_EQ(run({"synth-cities", "--trials", "100", "--seed", "7", "--out-dir", b.path().string()}).code, 0);
  for (const auto& entry : fs::directory_iterator(a.path())) {
    const auto name = entry.path().filename().string();
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
  }
  double lc = 0, mv = 0;
  std::istringstream in(slurp(a / "summary.csv"));
  std::string line;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const std::string name = line.substr(0, c1);
    const double med = std::atof(line.c_str() + c1 + 1);
    if (name == "LC_MDS") lc = med;
    if (name == "MVMDS@5") mv = med;
  }
  EXPECT_GT(lc, 0.0);
  EXPECT_LT(mv, lc);
}

TEST(CliSynthCities, RejectsZeroTrials) {
  TempDir dir;
  EXPECT_EQ(run({"synth-cities", "--trials", "0", "--out-dir", dir.path().string()}).code, 1);
}

TEST(CliEvalRetrieval, SeparableIsPerfect) {
  TempDir dir;
  const CliResult r = run({"eval-retrieval", separable_manifest(dir).string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("MVMDS", 0) != 0) continue;
    found = true;
    std::istringstream row(line);
    std::string name;
    double nn, ft, st, dcg;
    row >> name >> nn >> ft >> st >> dcg;
    EXPECT_EQ(nn, 1.0);
    EXPECT_EQ(ft, 1.0);
    EXPECT_EQ(st, 1.0);
    EXPECT_EQ(dcg, 1.0);
  }
  EXPECT_TRUE(found) << r.out;
  EXPECT_NE(r.out.find("LC_MDS"), std::string::npos);
  EXPECT_NE(r.out.find("View2"), std::string::npos);
}

TEST(CliEvalRetrieval, LabelLengthMismatch) {
  TempDir dir;
  const CliResult r = run({"eval-retrieval", separable_manifest(dir, 29).string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("LengthMismatch"), std::string::npos) << r.err;
}

TEST(CliEvalRetrieval, SingletonWarning) {
  TempDir dir;
  write_matrix_csv(six_cities().delta(), dir / "t.csv");
  write(dir / "l.txt", "0\n0\n0\n1\n1\n2\n");
  write(dir / "m.json", R"({"views": ["t.csv"], "labels": "l.txt"})");
  const CliResult r = run({"eval-retrieval", (dir / "m.json").string(), "--dim", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("SingletonClass"), std::string::npos) << r.err;
}

TEST(CliEvalCluster, SeparableBlobs) {
  TempDir dir;
  const CliResult r = run({"eval-cluster", separable_manifest(dir).string(), "--repeats", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("MVMDS"), std::string::npos);
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("MVMDS", 0) == 0) {
      EXPECT_EQ(count(line, "100.0±0.00"), 3) << line;
    }
  }
}

TEST(CliEvalCluster, SingleRepeatHasZeroSd) {
  TempDir dir;
  const LabeledProblem lp = make_informative_noise_problem(45, 3, 2);
  write_matrix_csv(lp.problem.view(0).delta(), dir / "a.csv");
  write_matrix_csv(lp.problem.view(1).delta(), dir / "b.csv");
  std::string labels;
  for (int l : lp.labels) labels += std::to_string(l) + "\n";
  write(dir / "l.txt", labels);
  write(dir / "m.json", R"({"views": ["a.csv", "b.csv"], "labels": "l.txt"})");
  const CliResult r = run({"eval-cluster", (dir / "m.json").string(), "--repeats", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("(", 0) == 0) continue;
    ++rows;
    EXPECT_EQ(count(line, "±0.00"), 3) << line;
  }
  EXPECT_EQ(rows, 4);  // View1, View2, LC_MDS, MVMDS
}

TEST(CliPlot, RejectsHighDimensionalReport) {
  TempDir dir;
  write_matrix_csv(six_cities().delta(), dir / "t.csv");
  write(dir / "m.json", R"({"views": ["t.csv"]})");
  ASSERT_EQ(run({"solve", (dir / "m.json").string(), "--dim", "5", "--out", (dir / "r.json").string()}).code, 0);
  const CliResult r = run({"plot", (dir / "r.json").string(), "--out", (dir / "p.svg").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("WrongDimension"), std::string::npos) << r.err;
}

TEST(CliPlot, CityReportWithTruth) {
  TempDir dir;
  ASSERT_EQ(run({"synth-cities", "--trials", "1", "--out-dir", dir.path().string()}).code, 0);
  ASSERT_EQ(run({"solve", city_manifest(dir, 0).string(), "--out", (dir / "r.json").string()}).code, 0);
  const CliResult r = run({"plot", (dir / "r.json").string(), "--truth-csv", (dir / "cities.csv").string(),
                     "--out", (dir / "p.svg").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string svg = slurp(dir / "p.svg");
  EXPECT_EQ(count(svg, "<circle"), 12);
  EXPECT_EQ(count(svg, "class=\"point-label\""), 6);
  EXPECT_NE(svg.find(">HOU</text>"), std::string::npos);
  EXPECT_EQ(count(svg, "class=\"series\""), 2);
}

TEST(CliPlot, WithoutTruthIsSingleSeries) {
  TempDir dir;
  ASSERT_EQ(run({"solve", city_manifest(dir, 1).string(), "--out", (dir / "r.json").string()}).code, 0);
  ASSERT_EQ(run({"plot", (dir / "r.json").string(), "--out", (dir / "p.svg").string()}).code, 0);
  const std::string svg = slurp(dir / "p.svg");
  EXPECT_EQ(count(svg, "class=\"series\""), 1);
  EXPECT_EQ(count(svg, "<circle"), 6);
}

TEST(CliPipelines, RepeatedClusteringSeeds) {
  const LabeledProblem lp = make_informative_noise_problem(60, 3, 4);
  const SolveReport r = solve_single_view(lp.problem.view(0), SolverConfig{});
  const cli::ClusterSummary a = cli::repeated_clustering(r.config_out.x, lp.labels, 4, 11);
  const cli::ClusterSummary b = cli::repeated_clustering(r.config_out.x, lp.labels, 4, 11);
  EXPECT_EQ(a.acc.mean, b.acc.mean);
  EXPECT_EQ(a.nmi.sd, b.nmi.sd);
  EXPECT_GE(a.acc.mean, 0.0);
  EXPECT_LE(a.acc.mean, 1.0);
}
