#pragma once

// Multi-class graph classifiers, the argmax decision rule, metrics and the
// repeated-trial benchmark protocol.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infsl/dataset.hpp"
#include "infsl/graph.hpp"
#include "infsl/label_field.hpp"
#include "infsl/solvers.hpp"

namespace infsl {

/// Labeled set: node indices (strictly increasing) and their classes.
struct LabelConstraint {
  std::vector<std::size_t> indices;
  std::vector<int> classes;
  int num_classes = 0;

  /// Builds a constraint from unordered (node, class) pairs.
  static LabelConstraint from_pairs(std::vector<std::pair<std::size_t, int>> pairs, int num_classes);

  void validate(std::size_t n) const;
  /// Boundary data for one class column: 1 on class-c nodes, 0 on the rest.
  BoundaryData one_hot(int c) const;
};

enum class Method { infsl, infl, laplace, poisson };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct Classification {
  std::vector<int> predictions;
  LabelField field;
  std::size_t iterations = 0;  ///< total sweeps (summed over columns where solved separately)
  bool converged = true;
};

/// Per node argmax over field columns (ties to the lowest class), with
/// labeled nodes forced to their given class.
std::vector<int> decide(const LabelField& field, const LabelConstraint& lc);

/// Per-class minimal Lipschitz extension of one-hot labels, then argmax.
Classification infl_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg);

/// Called after every outer iteration of the segregated scheme with the
/// 1-based iteration count and the truncated field.
using InfslObserver = std::function<void(std::size_t, const LabelField&)>;

/// Segregated scheme: each outer iteration runs one Lipschitz sweep per
/// column, then truncates u_c <- max(u*_c - sum_{p != c} u*_p, 0) on free
/// nodes. Nodes where every column ends at 0 are decided by the
/// pre-truncation values.
Classification infsl_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg,
                              const InfslObserver& observer = {});

/// Per-class harmonic extension of one-hot labels, then argmax.
Classification laplace_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg);

/// Poisson learning: sources y_i - mean(y) on labeled rows, zero elsewhere.
Classification poisson_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg);

/// Source matrix used by poisson_classify.
LabelField poisson_sources(std::size_t n, const LabelConstraint& lc);

Classification classify(Method method, const Graph& g, const LabelConstraint& lc,
                        const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Metrics

struct ClassMetrics {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::size_t support = 0;  ///< scored nodes whose true class is this one

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct Evaluation {
  double accuracy = 1.0;
  std::size_t scored = 0;
  std::vector<ClassMetrics> per_class;
  std::vector<std::size_t> confusion;  ///< k x k row-major, row = truth, column = prediction
};

/// Scores every node not listed in `excluded`. An empty scored set has
/// accuracy 1. Classes absent from both truth and prediction get
/// precision = recall = F1 = 1; absent from one side only, 0.
Evaluation evaluate(std::span<const int> predictions, std::span<const int> truth, int num_classes,
                    std::span<const std::size_t> excluded = {});

// ---------------------------------------------------------------------------
// Trials

/// How many labels each trial draws per class.
struct LabelBudget {
  std::size_t per_class = 0;  ///< used when fraction is unset
  std::optional<double> fraction;

  void validate() const;
};

struct TrialSpec {
  LabelBudget budget{1, std::nullopt};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Method method = Method::infsl;
  SolverConfig solver;
  std::size_t threads = 1;  ///< worker cap; results do not depend on it
};

struct GraphParams {
  std::size_t k = 10;
  WeightKernel kernel = GaussianSelfTuning{};
};

struct TrialReport {
  Method method = Method::infsl;
  int num_classes = 0;
  std::vector<double> accuracies;
  double mean_accuracy = 0.0;
  std::vector<ClassMetrics> mean_per_class;  ///< means over trials; support is summed
  std::vector<std::size_t> confusion;
  std::size_t convergence_failures = 0;
  std::vector<int> first_trial_predictions;
  std::vector<std::size_t> first_trial_labeled;

  friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

/// Stratified draw for one trial. The stream depends only on (seed, trial)
/// and the order of `truth`.
LabelConstraint sample_labels(std::span<const int> truth, int num_classes, const LabelBudget& budget,
                              std::uint64_t seed, std::size_t trial);

/// Runs the protocol on a prebuilt graph whose nodes align with `truth`.
TrialReport run_trials(const Graph& g, std::span<const int> truth, int num_classes, const TrialSpec& spec);

/// Builds the K-NN graph once, then runs the protocol.
TrialReport run_trials(const Dataset& data, const GraphParams& params, const TrialSpec& spec);

}  // namespace infsl
