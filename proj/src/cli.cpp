#include "mvmds/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mvmds/io.hpp"
#include "mvmds/synth.hpp"

namespace mvmds::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string gamma_name(double g) { return "MVMDS@" + fmt("%g", g); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd r;
  r.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return r;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> names;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) names.push_back(item);
  return names;
}

// Header tokens of a CSV file, or empty when its first row is numeric.
std::vector<std::string> csv_header(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_names(line);
    for (auto& t : tokens) {
      const auto a = t.find_first_not_of(" \t");
      const auto b = t.find_last_not_of(" \t");
      t = a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
    }
    if (tokens.empty()) return {};
    try {
      std::size_t used = 0;
      std::stod(tokens.front(), &used);
      if (used == tokens.front().size()) return {};
    } catch (const std::exception&) {
    }
    return tokens;
  }
  return {};
}

struct LoadedInput {
  MultiViewProblem problem;
  std::vector<int> labels;
};

LoadedInput load_labeled(const fs::path& manifest_path, std::ostream& err) {
  const ProblemManifest manifest = read_manifest(manifest_path);
  if (!manifest.labels_path) {
    throw Error(ErrorCode::InvalidConfig, manifest_path.string() + ": manifest has no labels");
  }
  MultiViewProblem problem = load_problem(manifest);
  std::vector<int> labels = read_labels(*manifest.labels_path);
  if (static_cast<Eigen::Index>(labels.size()) != problem.n()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(labels.size()) + " labels for " +
                                               std::to_string(problem.n()) + " objects");
  }
  std::map<int, int> sizes;
  for (int l : labels) ++sizes[l];
  for (const auto& [label, count] : sizes) {
    if (count == 1) {
      err << "warning: SingletonClass: class " << label
          << " has one member; its query is skipped for FT/ST/DCG\n";
    }
  }
  return LoadedInput{std::move(problem), std::move(labels)};
}

}  // namespace

std::vector<MethodEmbedding> embed_methods(const MultiViewProblem& problem,
                                           const SolverConfig& cfg) {
  std::vector<MethodEmbedding> methods;
  for (std::size_t v = 0; v < problem.m(); ++v) {
    methods.push_back({"View" + std::to_string(v + 1), solve_single_view(problem.view(v), cfg)});
  }
  if (problem.fully_observed()) methods.push_back({"LC_MDS", lc_mds_baseline(problem, cfg)});
  methods.push_back({"MVMDS", solve(problem, cfg)});
  return methods;
}

std::vector<MethodRetrieval> evaluate_retrieval(const std::vector<MethodEmbedding>& methods,
                                                const std::vector<int>& labels) {
  std::vector<MethodRetrieval> out;
  for (const auto& m : methods) {
    out.push_back({m.name, retrieval_scores(LabeledEmbedding(m.report.config_out.x, labels))});
  }
  return out;
}

ClusterSummary repeated_clustering(const Matrix& x, const std::vector<int>& labels, int repeats,
                                   std::uint64_t seed) {
  if (repeats < 1) throw Error(ErrorCode::InvalidConfig, "repeats must be >= 1");
  if (static_cast<Eigen::Index>(labels.size()) != x.rows()) {
    throw Error(ErrorCode::LengthMismatch, "labels do not match the embedding");
  }
  std::vector<int> distinct(labels);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int k = static_cast<int>(distinct.size());

  std::vector<double> acc, nmi, purity;
  for (int r = 0; r < repeats; ++r) {
    const KMeansResult km = kmeans(x, k, mix_seed(seed, static_cast<std::uint64_t>(r)));
    const ClusteringScores s = clustering_scores(km.assignment, labels);
    acc.push_back(s.acc);
    nmi.push_back(s.nmi);
    purity.push_back(s.purity);
  }
  return ClusterSummary{mean_sd(acc), mean_sd(nmi), mean_sd(purity)};
}

std::vector<MethodClustering> evaluate_clustering(const std::vector<MethodEmbedding>& methods,
                                                  const std::vector<int>& labels, int repeats,
                                                  std::uint64_t seed) {
  std::vector<MethodClustering> out;
  for (const auto& m : methods) {
    out.push_back({m.name, repeated_clustering(m.report.config_out.x, labels, repeats, seed)});
  }
  return out;
}

CityTrial run_city_trial(std::uint64_t seed, const std::vector<double>& gammas, int dim) {
  const MultiViewProblem problem = make_city_problem(default_city_specs(seed));
  const DistanceView truth = six_cities();
  SolverConfig cfg;
  cfg.p = dim;

  CityTrial trial;
  auto add = [&](std::string name, SolveReport report) {
    trial.truth_stress.push_back(stress(truth, report.config_out));
    trial.methods.push_back(std::move(name));
    trial.reports.push_back(std::move(report));
  };
  for (std::size_t v = 0; v < problem.m(); ++v) {
    add("View" + std::to_string(v + 1), solve_single_view(problem.view(v), cfg));
  }
  add("LC_MDS", lc_mds_baseline(problem, cfg));
  for (double g : gammas) {
    SolverConfig gcfg = cfg;
    gcfg.gamma = g;
    add(gamma_name(g), solve(problem, gcfg));
  }
  return trial;
}

namespace {

void print_report(const SolveReport& report, std::ostream& out) {
  const double final_objective =
      report.trace.empty() ? report.initial_objective : report.trace.back().objective_value;
  out << "objective: " << fmt("%.10g", final_objective) << "\n"
      << "iterations: " << report.iterations_used << "\n"
      << "converged: " << (report.converged ? "true" : "false") << "\n"
      << "weights:";
  for (std::size_t v = 0; v < report.weights_out.size(); ++v) {
    out << ' ' << fmt("%.10g", report.weights_out[v]);
  }
  out << "\n";
}

struct SolveArgs {
  std::string manifest;
  double gamma = 5.0;
  int dim = 2;
  double tol = 1e-6;
  int max_iter = 500;
  std::string init = "classical";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_solve(const SolveArgs& a, const CLI::App& sub, std::ostream& out) {
  ProblemManifest manifest = read_manifest(a.manifest);
  SolverConfig cfg = manifest.solver;
  if (sub.count("--gamma")) cfg.gamma = a.gamma;
  if (sub.count("--dim")) cfg.p = a.dim;
  if (sub.count("--tol")) cfg.tol = a.tol;
  if (sub.count("--max-iter")) cfg.max_iter = a.max_iter;
  if (sub.count("--init")) cfg.init = parse_init_mode(a.init);
  if (sub.count("--seed")) cfg.seed = a.seed;
  cfg.validate();

  const MultiViewProblem problem = load_problem(manifest);
  const SolveReport report = solve(problem, cfg);
  write_report_json(report, a.out);
  print_report(report, out);
  return 0;
}

struct SynthArgs {
  double gamma = 5.0;
  std::uint64_t seed = 0;
  int trials = 20;
  int dim = 2;
  std::string out_dir;
};

int cmd_synth_cities(const SynthArgs& a, std::ostream& out) {
  if (a.trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (!(a.gamma >= 1.0)) throw Error(ErrorCode::GammaBelowOne, "gamma must be >= 1");
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);

  std::vector<double> gammas = kCityGammas;
  if (std::find(gammas.begin(), gammas.end(), a.gamma) == gammas.end()) gammas.push_back(a.gamma);
  const std::string headline = gamma_name(a.gamma);

  std::vector<CityTrial> trials;
  trials.reserve(static_cast<std::size_t>(a.trials));
  for (int t = 0; t < a.trials; ++t) {
    trials.push_back(run_city_trial(a.seed + static_cast<std::uint64_t>(t), gammas, a.dim));
  }
  const std::vector<std::string>& methods = trials.front().methods;
  const std::size_t headline_index = static_cast<std::size_t>(
      std::find(methods.begin(), methods.end(), headline) - methods.begin());

  std::string per_trial = "trial,seed";
  for (const auto& m : methods) per_trial += "," + m;
  per_trial += "\n";
  for (int t = 0; t < a.trials; ++t) {
    per_trial += std::to_string(t) + "," + std::to_string(a.seed + static_cast<std::uint64_t>(t));
    for (double s : trials[static_cast<std::size_t>(t)].truth_stress) per_trial += "," + fmt("%.10g", s);
    per_trial += "\n";
  }
  write_text_file(dir / "trials.csv", per_trial);

  std::string summary = "method,median_truth_stress,mean_truth_stress,win_rate_of_" + headline + "\n";
  out << "six cities, " << a.trials << " trial(s), truth stress (x1e5)\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %12s %12s %10s\n", "method", "median", "mean",
                ("win:" + headline).c_str());
  out << line;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<double> values;
    int wins = 0;
    for (const auto& trial : trials) {
      values.push_back(trial.truth_stress[m]);
      if (trial.truth_stress[headline_index] < trial.truth_stress[m]) ++wins;
    }
    const double med = median(values);
    const double mean = mean_sd(values).mean;
    const double win_rate = static_cast<double>(wins) / a.trials;
    const bool self = m == headline_index;
    summary += methods[m] + "," + fmt("%.10g", med) + "," + fmt("%.10g", mean) + "," +
               (self ? std::string() : fmt("%.4f", win_rate)) + "\n";
    std::snprintf(line, sizeof line, "%-12s %12.3f %12.3f %10s\n", methods[m].c_str(), med / 1e5,
                  mean / 1e5, self ? "-" : fmt("%.2f", win_rate).c_str());
    out << line;
  }
  write_text_file(dir / "summary.csv", summary);

  // Ground truth CSV with city names as header, usable with `plot --truth-csv`.
  const DistanceView truth = six_cities();
  std::string truth_csv;
  for (std::size_t c = 0; c < kCityNames.size(); ++c) {
    truth_csv += (c ? "," : "") + std::string(kCityNames[c]);
  }
  truth_csv += "\n";
  for (Eigen::Index i = 0; i < truth.n(); ++i) {
    for (Eigen::Index j = 0; j < truth.n(); ++j) truth_csv += (j ? "," : "") + fmt("%g", truth.delta(i, j));
    truth_csv += "\n";
  }
  write_text_file(dir / "cities.csv", truth_csv);

  // Trial 0 figures.
  SolverConfig cfg;
  cfg.p = a.dim;
  const std::vector<std::string> names(kCityNames.begin(), kCityNames.end());
  const CityTrial& first = trials.front();
  if (a.dim == 2) {
    const Configuration ground = solve_single_view(truth, cfg).config_out;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const Configuration aligned = procrustes_align(first.reports[m].config_out, ground);
      std::string file = methods[m];
      std::replace(file.begin(), file.end(), '@', '_');
      std::transform(file.begin(), file.end(), file.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      write_scatter_svg({{ground, "groundtruth", "#9e9e9e"}, {aligned, methods[m], "#ff7f0e"}},
                        dir / ("trial0_" + file + ".svg"), names,
                        methods[m] + " (truth stress " + fmt("%.3g", first.truth_stress[m]) + ")");
    }
  }

  const MultiViewProblem problem = make_city_problem(default_city_specs(a.seed));
  std::vector<CurveSeries> weight_curves(problem.m());
  std::string weights_csv = "gamma";
  for (std::size_t v = 0; v < problem.m(); ++v) {
    weights_csv += ",alpha" + std::to_string(v + 1);
    weight_curves[v].label = "View " + std::to_string(v + 1);
    weight_curves[v].color = series_palette()[v % series_palette().size()];
  }
  weights_csv += "\n";
  for (int step = 3; step <= 100; ++step) {
    SolverConfig gcfg = cfg;
    gcfg.gamma = 0.5 * step;
    const SolveReport r = solve(problem, gcfg);
    weights_csv += fmt("%g", gcfg.gamma);
    for (std::size_t v = 0; v < problem.m(); ++v) {
      weights_csv += "," + fmt("%.10g", r.weights_out[v]);
      weight_curves[v].x.push_back(gcfg.gamma);
      weight_curves[v].y.push_back(r.weights_out[v]);
    }
    weights_csv += "\n";
  }
  write_text_file(dir / "weights_vs_gamma.csv", weights_csv);
  write_text_file(dir / "weights_vs_gamma.svg",
                  render_line_svg(weight_curves, "gamma", "learned weight", "View weights vs gamma"));

  const SolveReport& headline_report = first.reports[headline_index];
  CurveSeries curve{{}, {}, headline, series_palette()[1]};
  std::string conv_csv = "iter,objective\n";
  conv_csv += "0," + fmt("%.10g", headline_report.initial_objective) + "\n";
  curve.x.push_back(0.0);
  curve.y.push_back(headline_report.initial_objective);
  for (const auto& rec : headline_report.trace) {
    conv_csv += std::to_string(rec.iter) + "," + fmt("%.10g", rec.objective_value) + "\n";
    curve.x.push_back(rec.iter);
    curve.y.push_back(rec.objective_value);
  }
  write_text_file(dir / "convergence.csv", conv_csv);
  write_text_file(dir / "convergence.svg",
                  render_line_svg({curve}, "iteration", "objective", "Convergence of " + headline));
  return 0;
}

struct EvalArgs {
  std::string manifest;
  int dim = 10;
  double gamma = 5.0;
  std::uint64_t seed = 0;
  int repeats = 20;
};

SolverConfig eval_config(const EvalArgs& a, const fs::path& manifest_path) {
  SolverConfig cfg = read_manifest(manifest_path).solver;
  cfg.p = a.dim;
  cfg.gamma = a.gamma;
  cfg.seed = a.seed;
  cfg.validate();
  return cfg;
}

int cmd_eval_retrieval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const SolverConfig cfg = eval_config(a, a.manifest);
  const LoadedInput input = load_labeled(a.manifest, err);
  const auto results = evaluate_retrieval(embed_methods(input.problem, cfg), input.labels);
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %8s %8s %8s %8s\n", "method", "NN", "FT", "ST", "DCG");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-10s %8.4f %8.4f %8.4f %8.4f\n", r.name.c_str(), r.scores.nn,
                  r.scores.ft, r.scores.st, r.scores.dcg);
    out << line;
  }
  return 0;
}

std::string pm(const MeanSd& v) {
  return fmt("%.1f", 100.0 * v.mean) + "±" + fmt("%.2f", 100.0 * v.sd);
}

int cmd_eval_cluster(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const SolverConfig cfg = eval_config(a, a.manifest);
  const LoadedInput input = load_labeled(a.manifest, err);
  const auto results =
      evaluate_clustering(embed_methods(input.problem, cfg), input.labels, a.repeats, a.seed);
  char line[200];
  std::snprintf(line, sizeof line, "%-10s %14s %14s %14s\n", "method", "ACC", "NMI", "Purity");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-10s %14s %14s %14s\n", r.name.c_str(),
                  pm(r.summary.acc).c_str(), pm(r.summary.nmi).c_str(),
                  pm(r.summary.purity).c_str());
    out << line;
  }
  out << "(percent, mean±sd over " << a.repeats << " k-means run(s))\n";
  return 0;
}

struct PlotArgs {
  std::string report;
  std::string truth_csv;
  std::string names;
  std::string title;
  std::string out;
};

int cmd_plot(const PlotArgs& a) {
  const SolveReport report = read_report_json(a.report);
  if (report.config_out.p() != 2) {
    throw Error(ErrorCode::WrongDimension,
                "plot needs a 2-D embedding, report has P = " + std::to_string(report.config_out.p()));
  }
  std::vector<std::string> names = split_names(a.names);
  std::vector<ScatterSeries> series;
  if (!a.truth_csv.empty()) {
    const DistanceView truth = validate_view(read_matrix_csv(a.truth_csv));
    if (truth.n() != report.config_out.n()) {
      throw Error(ErrorCode::DimensionMismatch, "truth matrix and report differ in object count");
    }
    if (names.empty()) names = csv_header(a.truth_csv);
    const Configuration ground(classical_mds(truth.delta(), 2));
    series.push_back({ground, "groundtruth", "#9e9e9e"});
    series.push_back({procrustes_align(report.config_out, ground), "result", "#ff7f0e"});
  } else {
    series.push_back({report.config_out, "result", "#ff7f0e"});
  }
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != report.config_out.n()) {
    throw Error(ErrorCode::LengthMismatch, "name count does not match the embedding");
  }
  write_scatter_svg(series, a.out, names, a.title);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metric MDS over multiple distance matrices with learned view weights", "mvmds"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Embed the views listed in a manifest");
  solve_cmd->add_option("manifest", solve_args.manifest, "Problem manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--gamma", solve_args.gamma, "Weight controller (>= 1)");
  solve_cmd->add_option("--dim", solve_args.dim, "Embedding dimension");
  solve_cmd->add_option("--tol", solve_args.tol, "Relative objective decrease threshold");
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "Iteration cap");
  solve_cmd->add_option("--init", solve_args.init, "classical | random");
  solve_cmd->add_option("--seed", solve_args.seed, "Seed for random initialization");
  solve_cmd->add_option("--out", solve_args.out, "Report JSON path")->required();

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth-cities", "Run the six-cities noisy-participant experiment");
  synth_cmd->add_option("--gamma", synth_args.gamma, "Gamma used for win rates and figures")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.seed, "Base seed; trial t uses seed + t")
      ->capture_default_str();
  synth_cmd->add_option("--trials", synth_args.trials, "Number of trials")->capture_default_str();
  synth_cmd->add_option("--dim", synth_args.dim, "Embedding dimension")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();

  EvalArgs retrieval_args;
  auto* retrieval_cmd = app.add_subcommand("eval-retrieval", "NN/FT/ST/DCG of each method's embedding");
  retrieval_cmd->add_option("manifest", retrieval_args.manifest, "Manifest with labels")
      ->required()
      ->check(CLI::ExistingFile);
  retrieval_cmd->add_option("--dim", retrieval_args.dim)->capture_default_str();
  retrieval_cmd->add_option("--gamma", retrieval_args.gamma)->capture_default_str();
  retrieval_cmd->add_option("--seed", retrieval_args.seed)->capture_default_str();

  EvalArgs cluster_args;
  auto* cluster_cmd = app.add_subcommand("eval-cluster", "k-means ACC/NMI/Purity of each method");
  cluster_cmd->add_option("manifest", cluster_args.manifest, "Manifest with labels")
      ->required()
      ->check(CLI::ExistingFile);
  cluster_cmd->add_option("--dim", cluster_args.dim)->capture_default_str();
  cluster_cmd->add_option("--gamma", cluster_args.gamma)->capture_default_str();
  cluster_cmd->add_option("--repeats", cluster_args.repeats)->capture_default_str();
  cluster_cmd->add_option("--seed", cluster_args.seed)->capture_default_str();

  PlotArgs plot_args;
  auto* plot_cmd = app.add_subcommand("plot", "Render a 2-D report as SVG");
  plot_cmd->add_option("report", plot_args.report, "Report JSON")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--truth-csv", plot_args.truth_csv,
                       "True distance matrix; its classical MDS is drawn in gray");
  plot_cmd->add_option("--names", plot_args.names, "Comma-separated point names");
  plot_cmd->add_option("--title", plot_args.title);
  plot_cmd->add_option("--out", plot_args.out, "SVG path")->required();

  std::vector<std::string> argv_storage{"mvmds"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, *solve_cmd, out);
    if (synth_cmd->parsed()) return cmd_synth_cities(synth_args, out);
    if (retrieval_cmd->parsed()) return cmd_eval_retrieval(retrieval_args, out, err);
    if (cluster_cmd->parsed()) return cmd_eval_cluster(cluster_args, out, err);
    if (plot_cmd->parsed()) return cmd_plot(plot_args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace mvmds::cli
