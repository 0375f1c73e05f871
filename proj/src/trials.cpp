#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "infsl/error.hpp"
#include "infsl/learn.hpp"

namespace infsl {

Evaluation evaluate(std::span<const int> predictions, std::span<const int> truth, int num_classes,
                    std::span<const std::size_t> excluded) {
  if (predictions.size() != truth.size()) throw InvalidArgument("evaluate: length mismatch");
  if (num_classes < 1) throw InvalidArgument("evaluate: class count must be positive");
  const auto k = static_cast<std::size_t>(num_classes);
  std::vector<char> skip(truth.size(), 0);
  for (std::size_t i : excluded) skip.at(i) = 1;

  Evaluation ev;
  ev.confusion.assign(k * k, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (skip[i]) continue;
    if (truth[i] < 0 || truth[i] >= num_classes || predictions[i] < 0 || predictions[i] >= num_classes) {
      throw InvalidArgument("evaluate: class index outside [0, k) at node " + std::to_string(i));
    }
    ++ev.confusion[static_cast<std::size_t>(truth[i]) * k + static_cast<std::size_t>(predictions[i])];
    ++ev.scored;
    if (truth[i] == predictions[i]) ++correct;
  }
  ev.accuracy = ev.scored == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(ev.scored);

  ev.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t actual = 0, predicted = 0;
    for (std::size_t o = 0; o < k; ++o) {
      actual += ev.confusion[c * k + o];
      predicted += ev.confusion[o * k + c];
    }
    const auto tp = static_cast<double>(ev.confusion[c * k + c]);
    ClassMetrics& m = ev.per_class[c];
    m.support = actual;
    if (actual == 0 && predicted == 0) continue;  // vacuous class: all ones
    m.precision = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    m.recall = actual == 0 ? 0.0 : tp / static_cast<double>(actual);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return ev;
}

// ---------------------------------------------------------------------------

void LabelBudget::validate() const {
  if (fraction) {
    if (!(*fraction > 0.0 && *fraction < 1.0)) throw InvalidArgument("label fraction must be in (0, 1)");
  } else if (per_class < 1) {
    throw InvalidArgument("labels per class must be >= 1");
  }
}

LabelConstraint sample_labels(std::span<const int> truth, int num_classes, const LabelBudget& budget,
                              std::uint64_t seed, std::size_t trial) {
  budget.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);

  std::vector<std::pair<std::size_t, int>> picked;
  std::vector<std::size_t> members;
  for (int c = 0; c < num_classes; ++c) {
    members.clear();
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] == c) members.push_back(i);
    }
    std::size_t want = budget.per_class;
    if (budget.fraction) {
      want = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(*budget.fraction * static_cast<double>(members.size()))));
    }
    if (want > members.size()) {
      throw InvalidArgument("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                            " samples, fewer than the " + std::to_string(want) + " labels requested");
    }
    for (std::size_t t = 0; t < want; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, members.size() - 1);
      std::swap(members[t], members[pick(rng)]);
      picked.emplace_back(members[t], c);
    }
  }
  return LabelConstraint::from_pairs(std::move(picked), num_classes);
}

namespace {

struct TrialOutcome {
  Evaluation eval;
  bool converged = true;
  std::vector<int> predictions;
  std::vector<std::size_t> labeled;
};

}  // namespace

TrialReport run_trials(const Graph& g, std::span<const int> truth, int num_classes, const TrialSpec& spec) {
  if (truth.size() != g.size()) throw InvalidArgument("run_trials: labels do not match graph size");
  if (spec.trials < 1) throw InvalidArgument("run_trials: trials must be >= 1");
  spec.budget.validate();
  spec.solver.validate();

  std::vector<TrialOutcome> outcomes(spec.trials);
  auto run_one = [&](std::size_t t) {
    const LabelConstraint lc = sample_labels(truth, num_classes, spec.budget, spec.seed, t);
    Classification cls = classify(spec.method, g, lc, spec.solver);
    TrialOutcome& o = outcomes[t];
    o.eval = evaluate(cls.predictions, truth, num_classes, lc.indices);
    o.converged = cls.converged;
    if (t == 0) {
      o.predictions = std::move(cls.predictions);
      o.labeled = lc.indices;
    }
  };

  std::size_t workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
  workers = std::min(workers, spec.trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < spec.trials; ++t) run_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < spec.trials; t = next++) {
          try {
            run_one(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  // Aggregate in trial order so the means do not depend on scheduling.
  const auto k = static_cast<std::size_t>(num_classes);
  TrialReport rep;
  rep.method = spec.method;
  rep.num_classes = num_classes;
  rep.mean_per_class.assign(k, ClassMetrics{0.0, 0.0, 0.0, 0});
  rep.confusion.assign(k * k, 0);
  double acc_sum = 0.0;
  for (const TrialOutcome& o : outcomes) {
    rep.accuracies.push_back(o.eval.accuracy);
    acc_sum += o.eval.accuracy;
    if (!o.converged) ++rep.convergence_failures;
    for (std::size_t c = 0; c < k; ++c) {
      rep.mean_per_class[c].precision += o.eval.per_class[c].precision;
      rep.mean_per_class[c].recall += o.eval.per_class[c].recall;
      rep.mean_per_class[c].f1 += o.eval.per_class[c].f1;
      rep.mean_per_class[c].support += o.eval.per_class[c].support;
    }
    for (std::size_t e = 0; e < k * k; ++e) rep.confusion[e] += o.eval.confusion[e];
  }
  const auto trials = static_cast<double>(spec.trials);
  rep.mean_accuracy = acc_sum / trials;
  for (ClassMetrics& m : rep.mean_per_class) {
    m.precision /= trials;
    m.recall /= trials;
    m.f1 /= trials;
  }
  rep.first_trial_predictions = std::move(outcomes[0].predictions);
  rep.first_trial_labeled = std::move(outcomes[0].labeled);
  return rep;
}

TrialReport run_trials(const Dataset& data, const GraphParams& params, const TrialSpec& spec) {
  data.validate();
  if (!data.has_labels()) throw InvalidArgument("run_trials: dataset has no ground-truth labels");
  const Graph g = knn_graph(data, params.k, params.kernel);
  return run_trials(g, data.labels, data.num_classes, spec);
}

}  // namespace infsl
