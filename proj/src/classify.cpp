#include <algorithm>
#include <string>

#include "infsl/error.hpp"
#include "infsl/learn.hpp"

namespace infsl {

LabelConstraint LabelConstraint::from_pairs(std::vector<std::pair<std::size_t, int>> pairs, int num_classes) {
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    if (t > 0 && pairs[t].first == pairs[t - 1].first) {
      throw InvalidArgument("label constraint: node " + std::to_string(pairs[t].first) + " labeled twice");
    }
    if (pairs[t].second < 0 || pairs[t].second >= num_classes) {
      throw InvalidArgument("label constraint: class of node " + std::to_string(pairs[t].first) +
                            " outside [0, k)");
    }
  }
  LabelConstraint lc;
  lc.num_classes = num_classes;
  for (auto [i, c] : pairs) {
    lc.indices.push_back(i);
    lc.classes.push_back(c);
  }
  return lc;
}

void LabelConstraint::validate(std::size_t n) const {
  if (indices.empty()) throw InvalidArgument("label constraint: no labeled nodes");
  if (indices.size() != classes.size()) throw InvalidArgument("label constraint: indices/classes size mismatch");
  if (num_classes < 1) throw InvalidArgument("label constraint: class count must be positive");
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= n) throw InvalidArgument("label constraint: node index out of range");
    if (t > 0 && indices[t] <= indices[t - 1]) {
      throw InvalidArgument("label constraint: node indices must be strictly increasing");
    }
    if (classes[t] < 0 || classes[t] >= num_classes) {
      throw InvalidArgument("label constraint: class of node " + std::to_string(indices[t]) + " outside [0, k)");
    }
  }
}

BoundaryData LabelConstraint::one_hot(int c) const {
  BoundaryData bd;
  bd.indices = indices;
  bd.values.reserve(classes.size());
  for (int cls : classes) bd.values.push_back(cls == c ? 1.0 : 0.0);
  return bd;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::infsl: return "infsl";
    case Method::infl: return "infl";
    case Method::laplace: return "laplace";
    case Method::poisson: return "poisson";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::infsl, Method::infl, Method::laplace, Method::poisson}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t argmax_row(const LabelField& field, std::size_t i) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < field.cols(); ++c) {
    if (field(i, c) > field(i, best)) best = c;
  }
  return best;
}

std::vector<std::size_t> free_nodes_of(std::size_t n, const LabelConstraint& lc) {
  std::vector<char> fixed(n, 0);
  for (std::size_t i : lc.indices) fixed[i] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!fixed[i]) out.push_back(i);
  }
  return out;
}

template <class Solve>
Classification per_column(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg, Solve&& solve) {
  lc.validate(g.size());
  Classification out;
  out.field = LabelField(g.size(), static_cast<std::size_t>(lc.num_classes));
  for (int c = 0; c < lc.num_classes; ++c) {
    const SolveResult r = solve(g, lc.one_hot(c), cfg);
    std::copy(r.u.begin(), r.u.end(), out.field.column(static_cast<std::size_t>(c)).begin());
    out.iterations += r.iterations;
    out.converged = out.converged && r.converged;
  }
  out.predictions = decide(out.field, lc);
  return out;
}

}  // namespace

std::vector<int> decide(const LabelField& field, const LabelConstraint& lc) {
  std::vector<int> pred(field.rows(), 0);
  if (field.cols() == 0) return pred;
  for (std::size_t i = 0; i < field.rows(); ++i) pred[i] = static_cast<int>(argmax_row(field, i));
  for (std::size_t t = 0; t < lc.indices.size(); ++t) pred.at(lc.indices[t]) = lc.classes[t];
  return pred;
}

Classification infl_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg) {
  return per_column(g, lc, cfg, lipschitz_solve);
}

Classification laplace_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg) {
  return per_column(g, lc, cfg, laplace_solve);
}

Classification infsl_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg,
                              const InfslObserver& observer) {
  cfg.validate();
  lc.validate(g.size());
  if (lc.num_classes < 2) throw InvalidArgument("infsl_classify needs at least 2 classes");
  require_labeled_components(g, lc.indices);

  const std::size_t n = g.size();
  const auto k = static_cast<std::size_t>(lc.num_classes);
  const auto free_nodes = free_nodes_of(n, lc);
  const LipschitzUpdate update(g, cfg.length_mode);

  LabelField u(n, k, 0.0);
  for (std::size_t t = 0; t < lc.indices.size(); ++t) {
    u(lc.indices[t], static_cast<std::size_t>(lc.classes[t])) = 1.0;
  }
  LabelField ustar = u;

  Classification out;
  out.converged = false;
  double previous = 0.0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    ustar = u;
    for (std::size_t c = 0; c < k; ++c) update.sweep(ustar.column(c), free_nodes);

    double change = 0.0;
    for (std::size_t i : free_nodes) {
      for (std::size_t c = 0; c < k; ++c) {
        double others = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
          if (p != c) others += ustar(i, p);
        }
        const double next = std::max(ustar(i, c) - others, 0.0);
        change = std::max(change, std::abs(next - u(i, c)));
        u(i, c) = next;
      }
    }
    out.iterations = it;
    if (observer) observer(it, u);
    if (sweeps_settled(change, previous, cfg.tol)) {
      out.converged = true;
      break;
    }
    previous = change;
  }

  out.predictions = decide(u, lc);
  for (std::size_t i : free_nodes) {
    bool all_zero = true;
    for (std::size_t c = 0; c < k && all_zero; ++c) all_zero = u(i, c) == 0.0;
    if (all_zero) out.predictions[i] = static_cast<int>(argmax_row(ustar, i));
  }
  out.field = std::move(u);
  return out;
}

LabelField poisson_sources(std::size_t n, const LabelConstraint& lc) {
  lc.validate(n);
  const auto k = static_cast<std::size_t>(lc.num_classes);
  std::vector<double> mean(k, 0.0);
  for (int c : lc.classes) mean[static_cast<std::size_t>(c)] += 1.0;
  for (double& m : mean) m /= static_cast<double>(lc.indices.size());
  LabelField b(n, k, 0.0);
  for (std::size_t t = 0; t < lc.indices.size(); ++t) {
    for (std::size_t c = 0; c < k; ++c) {
      b(lc.indices[t], c) = (static_cast<std::size_t>(lc.classes[t]) == c ? 1.0 : 0.0) - mean[c];
    }
  }
  return b;
}

Classification poisson_classify(const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg) {
  PoissonResult r = poisson_solve(g, poisson_sources(g.size(), lc), cfg);
  Classification out;
  out.predictions = decide(r.u, lc);
  out.field = std::move(r.u);
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

Classification classify(Method method, const Graph& g, const LabelConstraint& lc, const SolverConfig& cfg) {
  switch (method) {
    case Method::infsl: return infsl_classify(g, lc, cfg);
    case Method::infl: return infl_classify(g, lc, cfg);
    case Method::laplace: return laplace_classify(g, lc, cfg);
    case Method::poisson: return poisson_classify(g, lc, cfg);
  }
  throw InvalidArgument("unknown method");
}

}  // namespace infsl
