#include "infsl/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "infsl/data.hpp"
#include "infsl/demo.hpp"
#include "infsl/error.hpp"
#include "infsl/learn.hpp"
#include "infsl/report.hpp"
#include "infsl/text.hpp"

namespace infsl {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceOpts {
  std::string gen;
  int classes = 2;
  std::size_t n = 2000;
  double noise = 0.15;
  std::string data;
  bool no_labels = false;
  std::string keel;
  std::string graph;
  std::string truth;
};

struct GraphOpts {
  std::size_t k = 10;
  std::string kernel = "gaussian";
  double alpha = 1.0;
  std::size_t k_sigma = 0;
};

struct SolverOpts {
  double tol = 1e-6;
  std::size_t max_iter = 100000;
  std::optional<double> dt;
  std::string length_mode = "graph";
};

struct Common {
  std::string out = ".";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

struct Budget {
  std::size_t per_class = 0;
  std::optional<double> fraction;
};

// Graph, optional ground truth and a description of where they came from.
struct Problem {
  Graph graph;
  std::vector<int> truth;
  int num_classes = 0;
  Metadata meta;
};

const std::map<std::string, LengthMode> kLengthModes{{"graph", LengthMode::graph_length},
                                                      {"euclidean", LengthMode::euclidean}};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<long long> read_int_lines(const std::string& path, std::size_t width, std::vector<long long>* second) {
  std::istringstream is(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  std::vector<long long> first;
  while (std::getline(is, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = text::split(s, ',');
    if (cells.size() != width) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                       " integer column(s)");
    }
    for (std::size_t t = 0; t < width; ++t) {
      const auto v = text::parse_int(cells[t]);
      if (!v || *v < 0) throw ParseError(path + " line " + std::to_string(lineno) + ": expected a non-negative integer");
      (t == 0 ? first : *second).push_back(*v);
    }
  }
  return first;
}

std::vector<int> read_truth(const std::string& path) {
  const auto v = read_int_lines(path, 1, nullptr);
  return {v.begin(), v.end()};
}

void add_source_options(CLI::App* app, SourceOpts& s, bool allow_graph) {
  app->add_option("--gen", s.gen, "Synthetic generator")->check(CLI::IsMember({"moons"}));
  app->add_option("--classes", s.classes, "Number of moons")->check(CLI::Range(2, 1000));
  app->add_option("--n", s.n, "Total number of generated points")->check(CLI::PositiveNumber);
  app->add_option("--noise", s.noise, "Gaussian noise level")->check(CLI::NonNegativeNumber);
  app->add_option("--data", s.data, "CSV feature file");
  app->add_flag("--no-labels", s.no_labels, "The CSV file has no label column");
  app->add_option("--keel", s.keel, "KEEL .dat file");
  if (allow_graph) {
    app->add_option("--graph", s.graph, "Edge-list file instead of a dataset");
    app->add_option("--truth", s.truth, "Ground-truth classes for --graph, one per line");
  }
}

void add_graph_options(CLI::App* app, GraphOpts& g) {
  app->add_option("--k", g.k, "Neighbors per node")->check(CLI::PositiveNumber);
  app->add_option("--kernel", g.kernel, "Weight kernel")
      ->check(CLI::IsMember({"gaussian", "cosine", "invdist"}));
  app->add_option("--alpha", g.alpha, "Inverse-distance exponent")->check(CLI::NonNegativeNumber);
  app->add_option("--k-sigma", g.k_sigma, "Self-tuning neighbor rank (0 = k)");
}

void add_solver_options(CLI::App* app, SolverOpts& s) {
  app->add_option("--tol", s.tol, "Sup-norm tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", s.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--dt", s.dt, "Evolution time step")->check(CLI::PositiveNumber);
  app->add_option("--length-mode", s.length_mode, "Edge lengths for the Lipschitz update")
      ->check(CLI::IsMember({"graph", "euclidean"}));
}

void add_common_options(CLI::App* app, Common& c, bool with_threads) {
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Random seed");
  if (with_threads) app->add_option("--threads", c.threads, "Worker cap (0 = all cores)");
}

void add_budget_options(CLI::App* app, Budget& b) {
  auto* per = app->add_option("--labels-per-class", b.per_class, "Labels drawn per class")
                  ->check(CLI::PositiveNumber);
  auto* frac = app->add_option("--label-fraction", b.fraction, "Fraction of each class to label")
                   ->check(CLI::Range(0.0, 1.0));
  per->excludes(frac);
}

LabelBudget to_budget(const Budget& b) {
  LabelBudget out;
  if (b.fraction) {
    if (!(*b.fraction > 0.0 && *b.fraction < 1.0)) throw UsageError("--label-fraction must lie in (0, 1)");
    out.fraction = b.fraction;
  } else {
    out.per_class = b.per_class == 0 ? 1 : b.per_class;
  }
  return out;
}

SolverConfig to_config(const SolverOpts& s) {
  SolverConfig cfg;
  cfg.tol = s.tol;
  cfg.max_iter = s.max_iter;
  cfg.dt = s.dt;
  cfg.length_mode = kLengthModes.at(s.length_mode);
  return cfg;
}

WeightKernel to_kernel(const GraphOpts& g) {
  if (g.kernel == "cosine") return CosineAdjusted{};
  if (g.kernel == "invdist") return InverseDistance{g.alpha};
  return GaussianSelfTuning{g.k_sigma};
}

void check_one_source(const SourceOpts& s, bool allow_graph) {
  const int count = !s.gen.empty() + !s.data.empty() + !s.keel.empty() + (allow_graph && !s.graph.empty());
  if (count != 1) {
    throw UsageError(allow_graph ? "give exactly one of --gen, --data, --keel, --graph"
                                 : "give exactly one of --gen, --data, --keel");
  }
  if (!s.truth.empty() && s.graph.empty()) throw UsageError("--truth only applies to --graph input");
}

Dataset load_dataset(const SourceOpts& s, std::uint64_t seed, Metadata& meta) {
  if (!s.gen.empty()) {
    if (s.n % static_cast<std::size_t>(s.classes) != 0) {
      throw UsageError("--n must be a multiple of --classes");
    }
    meta.emplace_back("dataset", "moons");
    meta.emplace_back("noise", text::format_short(s.noise));
    meta.emplace_back("data_seed", std::to_string(seed));
    return gen_moons({s.classes, s.n / static_cast<std::size_t>(s.classes), s.noise, seed});
  }
  if (!s.keel.empty()) {
    KeelDataset kd = load_keel(s.keel);
    meta.emplace_back("dataset", s.keel);
    meta.emplace_back("minority_class", std::to_string(kd.minority_class));
    meta.emplace_back("imbalance_ratio", text::format_short(kd.imbalance_ratio));
    return std::move(kd.data);
  }
  meta.emplace_back("dataset", s.data);
  return load_csv(s.data, !s.no_labels);
}

std::string kernel_name(const GraphOpts& g) {
  if (g.kernel == "invdist") return "invdist(alpha=" + text::format_short(g.alpha) + ")";
  if (g.kernel == "gaussian") return "gaussian(k_sigma=" + std::to_string(g.k_sigma == 0 ? g.k : g.k_sigma) + ")";
  return g.kernel;
}

Problem load_problem(const SourceOpts& s, const GraphOpts& go, std::uint64_t seed) {
  Problem p;
  if (!s.graph.empty()) {
    std::istringstream is(read_file(s.graph));
    p.graph = read_edge_list(is);
    p.meta.emplace_back("graph_file", s.graph);
    if (!s.truth.empty()) {
      p.truth = read_truth(s.truth);
      if (p.truth.size() != p.graph.size()) throw ParseError("--truth length does not match the graph");
      p.num_classes = *std::max_element(p.truth.begin(), p.truth.end()) + 1;
    }
  } else {
    Dataset d = load_dataset(s, seed, p.meta);
    d.validate();
    p.meta.emplace_back("k", std::to_string(go.k));
    p.meta.emplace_back("kernel", kernel_name(go));
    p.graph = knn_graph(d, go.k, to_kernel(go));
    p.truth = d.labels;
    p.num_classes = d.num_classes;
  }
  p.meta.emplace_back("nodes", std::to_string(p.graph.size()));
  p.meta.emplace_back("edges", std::to_string(p.graph.num_edges()));
  p.meta.emplace_back("components", std::to_string(p.graph.num_components()));
  return p;
}

void add_solver_meta(Metadata& meta, const SolverOpts& s) {
  meta.emplace_back("tol", text::format_short(s.tol));
  meta.emplace_back("max_iter", std::to_string(s.max_iter));
  meta.emplace_back("length_mode", s.length_mode);
  if (s.dt) meta.emplace_back("dt", text::format_short(*s.dt));
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------------------

int cmd_gen(const SourceOpts& s, const Common& c, std::ostream& out) {
  check_one_source(s, false);
  if (s.gen.empty()) throw UsageError("gen needs --gen");
  Metadata meta;
  const Dataset d = load_dataset(s, c.seed, meta);
  const fs::path path = prepare_out(c.out) / "dataset.csv";
  save_csv(d, path.string());
  out << "wrote " << path.string() << " (" << d.size() << " points, " << d.num_classes << " classes)\n";
  return kExitOk;
}

int cmd_graph(const SourceOpts& s, const GraphOpts& go, const Common& c, std::ostream& out) {
  check_one_source(s, false);
  Problem p = load_problem(s, go, c.seed);
  double min_deg = p.graph.size() ? p.graph.degree(0) : 0.0;
  for (double d : p.graph.degrees()) min_deg = std::min(min_deg, d);
  p.meta.emplace_back("min_degree", text::format_double(min_deg));
  p.meta.emplace_back("max_degree", text::format_double(p.graph.max_degree()));

  const fs::path dir = prepare_out(c.out);
  std::ostringstream edges;
  write_edge_list(edges, p.graph);
  text::write_file_atomic((dir / "graph.edges").string(), edges.str());
  std::ostringstream summary;
  for (const auto& [k, v] : p.meta) summary << k << " = " << v << '\n';
  text::write_file_atomic((dir / "graph_summary.txt").string(), summary.str());
  out << summary.str();
  return kExitOk;
}

LabelConstraint read_labeled(const std::string& path, int& num_classes) {
  std::vector<long long> classes;
  const auto nodes = read_int_lines(path, 2, &classes);
  std::vector<std::pair<std::size_t, int>> pairs;
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    pairs.emplace_back(static_cast<std::size_t>(nodes[t]), static_cast<int>(classes[t]));
    num_classes = std::max(num_classes, static_cast<int>(classes[t]) + 1);
  }
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end(),
                         [](const auto& a, const auto& b) { return a.first == b.first; }) != pairs.end()) {
    throw ParseError(path + ": node listed twice");
  }
  return LabelConstraint::from_pairs(std::move(pairs), num_classes);
}

int cmd_classify(const SourceOpts& s, const GraphOpts& go, const SolverOpts& so, const Common& c,
                 const Budget& b, const std::string& method_name, const std::string& labeled_file,
                 std::ostream& out) {
  check_one_source(s, true);
  const Method method = *parse_method(method_name);
  const SolverConfig cfg = to_config(so);
  const LabelBudget budget = to_budget(b);
  if (labeled_file.empty() && (b.per_class == 0 && !b.fraction)) {
    throw UsageError("classify needs --labeled, --labels-per-class or --label-fraction");
  }
  Problem p = load_problem(s, go, c.seed);

  LabelConstraint lc;
  int k = p.num_classes;
  if (!labeled_file.empty()) {
    lc = read_labeled(labeled_file, k);
    k = std::max(k, p.num_classes);
    lc.num_classes = k;
  } else {
    if (p.truth.empty()) throw UsageError("sampling labels needs ground truth (dataset labels or --truth)");
    lc = sample_labels(p.truth, k, budget, c.seed, 0);
  }
  if (!p.truth.empty()) {
    for (std::size_t t = 0; t < lc.indices.size(); ++t) {
      if (lc.indices[t] >= p.truth.size()) throw InvalidArgument("labeled node outside the graph");
    }
  }
  const Classification cls = classify(method, p.graph, lc, cfg);

  p.meta.emplace_back("method", std::string(to_string(method)));
  p.meta.emplace_back("labeled", std::to_string(lc.indices.size()));
  p.meta.emplace_back("iterations", std::to_string(cls.iterations));
  p.meta.emplace_back("converged", cls.converged ? "true" : "false");
  add_solver_meta(p.meta, so);

  const fs::path dir = prepare_out(c.out);
  text::write_file_atomic((dir / "predictions.csv").string(), format_predictions_csv(cls.predictions, p.truth));
  std::ostringstream field;
  for (std::size_t i = 0; i < cls.field.rows(); ++i) {
    for (std::size_t col = 0; col < cls.field.cols(); ++col) {
      if (col) field << ',';
      field << text::format_double(cls.field(i, col));
    }
    field << '\n';
  }
  text::write_file_atomic((dir / "field.csv").string(), field.str());
  if (!p.truth.empty()) {
    const Evaluation ev = evaluate(cls.predictions, p.truth, k, lc.indices);
    write_report((dir / "report").string(), p.meta, report_from_evaluation(method, k, ev));
    out << "accuracy = " << text::format_double(ev.accuracy) << '\n';
  }
  out << "wrote " << (dir / "predictions.csv").string() << '\n';
  return cls.converged ? kExitOk : kExitNotConverged;
}

int cmd_bench(const SourceOpts& s, const GraphOpts& go, const SolverOpts& so, const Common& c,
              const Budget& b, const std::string& method_name, std::size_t trials, bool predictions,
              std::ostream& out) {
  check_one_source(s, true);
  if (!s.graph.empty() && s.truth.empty()) throw UsageError("bench on --graph needs --truth");
  const Method method = *parse_method(method_name);
  TrialSpec spec;
  spec.budget = to_budget(b);
  spec.trials = trials;
  spec.seed = c.seed;
  spec.method = method;
  spec.solver = to_config(so);
  spec.threads = c.threads;
  Problem p = load_problem(s, go, c.seed);
  if (p.truth.empty()) throw UsageError("bench needs labeled data");

  const TrialReport rep = run_trials(p.graph, p.truth, p.num_classes, spec);
  p.meta.emplace_back("method", std::string(to_string(method)));
  if (spec.budget.fraction) {
    p.meta.emplace_back("label_fraction", text::format_short(*spec.budget.fraction));
  } else {
    p.meta.emplace_back("labels_per_class", std::to_string(spec.budget.per_class));
  }
  p.meta.emplace_back("seed", std::to_string(c.seed));
  add_solver_meta(p.meta, so);

  const fs::path dir = prepare_out(c.out);
  write_report((dir / "report").string(), p.meta, rep);
  if (predictions) {
    text::write_file_atomic((dir / "predictions.csv").string(),
                            format_predictions_csv(rep.first_trial_predictions, p.truth));
  }
  out << "mean_accuracy = " << text::format_double(rep.mean_accuracy) << '\n';
  out << "convergence_failures = " << rep.convergence_failures << '\n';
  return rep.convergence_failures == 0 ? kExitOk : kExitNotConverged;
}

int cmd_demo(std::size_t m, int stencil, const std::string& mode, const std::string& layout,
             const SolverOpts& so, const Common& c, std::ostream& out) {
  DemoSpec spec;
  spec.m = m;
  spec.stencil = stencil == 4 ? Stencil::four : Stencil::eight;
  spec.mode = *parse_demo_mode(mode);
  spec.layout = *parse_source_layout(layout);
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const DemoResult r = pde_demo(spec, to_config(so));
  const auto& u = r.solve.u;

  Metadata meta{{"m", std::to_string(m)},
                {"stencil", std::to_string(stencil)},
                {"mode", mode},
                {"layout", layout}};
  add_solver_meta(meta, so);
  meta.emplace_back("iterations", std::to_string(r.solve.iterations));
  meta.emplace_back("converged", r.solve.converged ? "true" : "false");
  meta.emplace_back("residual", text::format_double(r.solve.residual));
  meta.emplace_back("center_value", text::format_double(u[r.grid.center()]));
  meta.emplace_back("value_near_0.5_0", text::format_double(u[r.grid.nearest(0.5, 0.0)]));

  const fs::path dir = prepare_out(c.out);
  std::ostringstream field;
  write_field_csv(field, u, m);
  text::write_file_atomic((dir / "field.csv").string(), field.str());
  std::ostringstream summary;
  for (const auto& [k, v] : meta) summary << k << " = " << v << '\n';
  text::write_file_atomic((dir / "demo.txt").string(), summary.str());
  out << summary.str();
  return r.solve.converged ? kExitOk : kExitNotConverged;
}

int cmd_eval(const std::string& pred_file, const std::string& truth_file, const std::string& exclude_file,
             int classes, const Common& c, std::ostream& out) {
  PredictionTable t = parse_predictions_csv(read_file(pred_file));
  if (!truth_file.empty()) t.truth = read_truth(truth_file);
  if (t.truth.empty()) throw UsageError("eval needs a true_class column or --truth");
  if (t.truth.size() != t.predictions.size()) throw ParseError("truth and predictions differ in length");
  std::vector<std::size_t> excluded;
  if (!exclude_file.empty()) {
    for (long long v : read_int_lines(exclude_file, 1, nullptr)) excluded.push_back(static_cast<std::size_t>(v));
  }
  int k = classes;
  for (int v : t.predictions) k = std::max(k, v + 1);
  for (int v : t.truth) k = std::max(k, v + 1);
  const Evaluation ev = evaluate(t.predictions, t.truth, k, excluded);
  Metadata meta{{"predictions", pred_file}, {"scored", std::to_string(ev.scored)}};
  const fs::path dir = prepare_out(c.out);
  write_report((dir / "report").string(), meta, report_from_evaluation(Method::infsl, k, ev));
  out << "accuracy = " << text::format_double(ev.accuracy) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph semi-supervised learning with Lipschitz and segregated infinity-Laplacian schemes"};
  app.name("infsl");
  app.require_subcommand(1);

  const std::vector<std::string> methods{"infsl", "infl", "laplace", "poisson"};

  SourceOpts gen_src;
  Common gen_common;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
  add_source_options(gen, gen_src, false);
  add_common_options(gen, gen_common, false);

  SourceOpts graph_src;
  GraphOpts graph_opts;
  Common graph_common;
  auto* graph = app.add_subcommand("graph", "Build a K-NN graph and write its edge list");
  add_source_options(graph, graph_src, false);
  add_graph_options(graph, graph_opts);
  add_common_options(graph, graph_common, false);

  SourceOpts cls_src;
  GraphOpts cls_graph;
  SolverOpts cls_solver;
  Common cls_common;
  Budget cls_budget;
  std::string cls_method = "infsl";
  std::string cls_labeled;
  auto* cls = app.add_subcommand("classify", "Run one classification and write predictions");
  add_source_options(cls, cls_src, true);
  add_graph_options(cls, cls_graph);
  add_solver_options(cls, cls_solver);
  add_common_options(cls, cls_common, false);
  add_budget_options(cls, cls_budget);
  cls->add_option("--method", cls_method, "Classifier")->check(CLI::IsMember(methods));
  cls->add_option("--labeled", cls_labeled, "File of node,class lines giving the labeled set");

  SourceOpts bench_src;
  GraphOpts bench_graph;
  SolverOpts bench_solver;
  Common bench_common;
  Budget bench_budget;
  std::string bench_method = "infsl";
  std::size_t bench_trials = 100;
  bool bench_predictions = false;
  auto* bench = app.add_subcommand("bench", "Repeated random-label trials with a metrics report");
  add_source_options(bench, bench_src, true);
  add_graph_options(bench, bench_graph);
  add_solver_options(bench, bench_solver);
  add_common_options(bench, bench_common, true);
  add_budget_options(bench, bench_budget);
  bench->add_option("--method", bench_method, "Classifier")->check(CLI::IsMember(methods));
  bench->add_option("--trials", bench_trials, "Number of trials")->check(CLI::PositiveNumber);
  bench->add_flag("--predictions", bench_predictions, "Also write first-trial predictions");

  std::size_t demo_m = 101;
  int demo_stencil = 8;
  std::string demo_mode = "infinity";
  std::string demo_layout = "center_one";
  SolverOpts demo_solver;
  Common demo_common;
  auto* demo = app.add_subcommand("pde-demo", "Point-source problem on a grid over [-1,1]^2");
  demo->add_option("--m", demo_m, "Grid side (odd)")->check(CLI::Range(std::size_t{3}, std::size_t{100001}));
  demo->add_option("--stencil", demo_stencil, "Neighbor stencil")->check(CLI::IsMember({4, 8}));
  demo->add_option("--mode", demo_mode, "Solver")->check(CLI::IsMember({"laplace", "infinity"}));
  demo->add_option("--layout", demo_layout, "Source layout")
      ->check(CLI::IsMember({"center_one", "ring_plus_center"}));
  add_solver_options(demo, demo_solver);
  add_common_options(demo, demo_common, false);

  std::string eval_pred, eval_truth, eval_exclude;
  int eval_classes = 0;
  Common eval_common;
  auto* ev = app.add_subcommand("eval", "Score a predictions CSV");
  ev->add_option("--predictions", eval_pred, "node_index,predicted_class[,true_class] file")->required();
  ev->add_option("--truth", eval_truth, "Ground-truth classes, one per line");
  ev->add_option("--exclude", eval_exclude, "Node indices to leave out of scoring, one per line");
  ev->add_option("--classes", eval_classes, "Class count (default: inferred)");
  add_common_options(ev, eval_common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_src, gen_common, out);
    if (graph->parsed()) return cmd_graph(graph_src, graph_opts, graph_common, out);
    if (cls->parsed()) {
      return cmd_classify(cls_src, cls_graph, cls_solver, cls_common, cls_budget, cls_method, cls_labeled, out);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_src, bench_graph, bench_solver, bench_common, bench_budget, bench_method,
                       bench_trials, bench_predictions, out);
    }
    if (demo->parsed()) return cmd_demo(demo_m, demo_stencil, demo_mode, demo_layout, demo_solver, demo_common, out);
    if (ev->parsed()) return cmd_eval(eval_pred, eval_truth, eval_exclude, eval_classes, eval_common, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace infsl
