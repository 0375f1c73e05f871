#include "infsl/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "infsl/error.hpp"
#include "infsl/operators.hpp"

namespace infsl {

void BoundaryData::validate(std::size_t n) const {
  if (indices.empty()) throw InvalidArgument("boundary data: labeled set is empty");
  if (indices.size() != values.size()) throw InvalidArgument("boundary data: indices/values size mismatch");
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= n) throw InvalidArgument("boundary data: index out of range");
    if (t > 0 && indices[t] <= indices[t - 1]) {
      throw InvalidArgument("boundary data: indices must be strictly increasing");
    }
    if (!std::isfinite(values[t])) throw InvalidArgument("boundary data: non-finite value");
  }
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (dt && !(*dt > 0.0)) throw InvalidArgument("time step must be positive");
}

void require_labeled_components(const Graph& g, std::span<const std::size_t> labeled) {
  const auto comp = g.components();
  const std::size_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<char> seen(count, 0);
  for (std::size_t i : labeled) seen.at(comp.at(i)) = 1;
  for (std::size_t c = 0; c < count; ++c) {
    if (!seen[c]) {
      const auto first = static_cast<std::size_t>(std::find(comp.begin(), comp.end(), c) - comp.begin());
      throw IllPosedProblem("connected component containing node " + std::to_string(first) +
                            " has no labeled node");
    }
  }
}

namespace {

// Unlabeled nodes in ascending order; also writes boundary values into u.
std::vector<std::size_t> setup_dirichlet(const Graph& g, const BoundaryData& bd,
                                         const SolverConfig& cfg, std::span<double> u) {
  cfg.validate();
  bd.validate(g.size());
  require_labeled_components(g, bd.indices);
  std::vector<char> fixed(g.size(), 0);
  for (std::size_t t = 0; t < bd.indices.size(); ++t) {
    fixed[bd.indices[t]] = 1;
    u[bd.indices[t]] = bd.values[t];
  }
  std::vector<std::size_t> free_nodes;
  free_nodes.reserve(g.size() - bd.indices.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!fixed[i]) free_nodes.push_back(i);
  }
  return free_nodes;
}

}  // namespace

bool sweeps_settled(double change, double previous, double tol) {
  if (change > tol) return false;
  const double rho = previous > 0.0 ? change / previous : 0.0;
  return change == 0.0 || (rho < 1.0 && change * rho <= tol * (1.0 - rho));
}

namespace {

template <class Sweep>
SolveResult iterate_sweeps(std::vector<double> u, const SolverConfig& cfg, bool has_free, Sweep&& sweep) {
  SolveResult res;
  if (!has_free) {
    res.u = std::move(u);
    res.converged = true;
    return res;
  }
  double previous = 0.0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const double change = sweep(std::span<double>(u));
    res.residual = change;
    res.iterations = it;
    if (sweeps_settled(change, previous, cfg.tol)) {
      res.converged = true;
      break;
    }
    previous = change;
  }
  res.u = std::move(u);
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------

LipschitzUpdate::LipschitzUpdate(const Graph& g, LengthMode mode) : graph_(&g) {
  const auto w = g.all_weights();
  const auto d = g.all_lengths();
  lengths_.resize(w.size());
  for (std::size_t e = 0; e < w.size(); ++e) {
    lengths_[e] = mode == LengthMode::graph_length ? std::max(1.0 / std::sqrt(w[e]), kMinLength) : d[e];
  }
  // Reciprocal pair lengths 1/(d_ia + d_ib), b >= a, row by row.
  pair_offsets_.assign(g.size() + 1, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t m = g.neighbors(i).size();
    pair_offsets_[i + 1] = pair_offsets_[i] + m * (m + 1) / 2;
  }
  inv_pair_.resize(pair_offsets_.back());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double* di = lengths_.data() + g.offset(i);
    const std::size_t m = g.neighbors(i).size();
    double* out = inv_pair_.data() + pair_offsets_[i];
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) *out++ = 1.0 / (di[a] + di[b]);
    }
  }
}

double LipschitzUpdate::value_at(std::span<const double> u, std::size_t i) const {
  const auto nb = graph_->neighbors(i);
  if (nb.empty()) return u[i];
  const double* d = lengths_.data() + graph_->offset(i);
  const double* inv = inv_pair_.data() + pair_offsets_[i];
  const std::size_t m = nb.size();
  thread_local std::vector<double> vals, row_max;
  vals.resize(m);
  row_max.resize(m);
  for (std::size_t a = 0; a < m; ++a) vals[a] = u[nb[a]];

  // Two passes give the first maximizer in (r, s) order: the largest ratio
  // per row, then the first row and column attaining the overall maximum.
  double best = 0.0;
  const double* row = inv;
  for (std::size_t a = 0; a < m; ++a) {
    const double ua = vals[a];
    double mx = 0.0;
    for (std::size_t b = a; b < m; ++b) mx = std::max(mx, std::abs(ua - vals[b]) * row[b - a]);
    row_max[a] = mx;
    best = std::max(best, mx);
    row += m - a;
  }
  std::size_t r = 0;
  row = inv;
  while (row_max[r] != best) row += m - r++;
  std::size_t s = r;
  while (std::abs(vals[r] - vals[s]) * row[s - r] != best) ++s;
  return (d[s] * vals[r] + d[r] * vals[s]) / (d[r] + d[s]);
}

double LipschitzUpdate::sweep(std::span<double> u, std::span<const std::size_t> free_nodes) const {
  double change = 0.0;
  for (std::size_t i : free_nodes) {
    const double v = value_at(u, i);
    change = std::max(change, std::abs(v - u[i]));
    u[i] = v;
  }
  return change;
}

SolveResult lipschitz_solve(const Graph& g, const BoundaryData& bd, const SolverConfig& cfg) {
  std::vector<double> u(g.size(), 0.0);
  const auto free_nodes = setup_dirichlet(g, bd, cfg, u);
  const LipschitzUpdate update(g, cfg.length_mode);
  return iterate_sweeps(std::move(u), cfg, !free_nodes.empty(),
                        [&](std::span<double> v) { return update.sweep(v, free_nodes); });
}

// ---------------------------------------------------------------------------

double evolution_step_bound(const Graph& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double first = 0.0, second = 0.0;
    for (double w : g.weights(i)) {
      const double s = std::sqrt(w);
      if (s > first) {
        second = first;
        first = s;
      } else if (s > second) {
        second = s;
      }
    }
    const double pair = g.neighbors(i).size() == 1 ? 2.0 * first : first + second;
    worst = std::max(worst, pair);
  }
  return worst > 0.0 ? 2.0 / worst : kInfinity;
}

SolveResult evolution_solve(const Graph& g, const BoundaryData& bd, std::span<const double> u0,
                            const SolverConfig& cfg) {
  if (u0.size() != g.size()) throw InvalidArgument("evolution_solve: u0 length does not match graph");
  std::vector<double> u(u0.begin(), u0.end());
  const auto free_nodes = setup_dirichlet(g, bd, cfg, u);
  for (std::size_t i : free_nodes) {
    if (g.neighbors(i).empty()) throw IllPosedProblem("isolated unlabeled node " + std::to_string(i));
  }

  double max_sqrt_w = 0.0;
  for (double w : g.all_weights()) max_sqrt_w = std::max(max_sqrt_w, std::sqrt(w));
  const double bound = evolution_step_bound(g);
  double dt = max_sqrt_w > 0.0 ? 0.9 / max_sqrt_w : 1.0;
  if (cfg.dt) {
    if (*cfg.dt > bound) {
      throw InvalidArgument("time step " + std::to_string(*cfg.dt) + " exceeds stability bound " +
                            std::to_string(bound));
    }
    dt = *cfg.dt;
  }

  std::vector<double> step(free_nodes.size());
  return iterate_sweeps(std::move(u), cfg, !free_nodes.empty(), [&](std::span<double> v) {
    double change = 0.0;
    for (std::size_t t = 0; t < free_nodes.size(); ++t) {
      step[t] = dt * infinity_laplacian(g, v, free_nodes[t]);
      change = std::max(change, std::abs(step[t]));
    }
    for (std::size_t t = 0; t < free_nodes.size(); ++t) v[free_nodes[t]] += step[t];
    return change;
  });
}

// ---------------------------------------------------------------------------

SolveResult laplace_solve(const Graph& g, const BoundaryData& bd, const SolverConfig& cfg) {
  std::vector<double> u(g.size(), 0.0);
  const auto free_nodes = setup_dirichlet(g, bd, cfg, u);
  for (std::size_t i : free_nodes) {
    if (!(g.degree(i) > 0.0)) throw IllPosedProblem("unlabeled node " + std::to_string(i) + " has zero degree");
  }
  return iterate_sweeps(std::move(u), cfg, !free_nodes.empty(), [&](std::span<double> v) {
    double change = 0.0;
    for (std::size_t i : free_nodes) {
      const auto nb = g.neighbors(i);
      const auto w = g.weights(i);
      double s = 0.0;
      for (std::size_t t = 0; t < nb.size(); ++t) s += w[t] * v[nb[t]];
      const double next = s / g.degree(i);
      change = std::max(change, std::abs(next - v[i]));
      v[i] = next;
    }
    return change;
  });
}

// ---------------------------------------------------------------------------

namespace {

// Minimizer over x of sum_j (s_j |x - v_j|)^p, s_j = sqrt(w_ij). The
// derivative sum_j s_j sign(x - v_j) (s_j |x - v_j|)^{p-1} is increasing in
// x; it is evaluated relative to its largest term so that large p neither
// overflows nor underflows.
double p_harmonic_value(std::span<const double> vals, std::span<const double> scale, double p) {
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  auto slope_sign = [&](double x) {
    double biggest = 0.0;
    for (std::size_t t = 0; t < vals.size(); ++t) biggest = std::max(biggest, scale[t] * std::abs(x - vals[t]));
    if (biggest == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t t = 0; t < vals.size(); ++t) {
      const double diff = x - vals[t];
      if (diff == 0.0) continue;
      s += scale[t] * std::copysign(std::pow(scale[t] * std::abs(diff) / biggest, p - 1.0), diff);
    }
    return s;
  };
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = slope_sign(mid);
    if (s == 0.0) return mid;
    (s > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SolveResult p_laplace_solve(const Graph& g, const BoundaryData& bd, double p, const SolverConfig& cfg) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidArgument("p_laplace_solve: p must be finite and >= 2");
  std::vector<double> u(g.size(), 0.0);
  const auto free_nodes = setup_dirichlet(g, bd, cfg, u);
  for (std::size_t i : free_nodes) {
    if (g.neighbors(i).empty()) throw IllPosedProblem("isolated unlabeled node " + std::to_string(i));
  }
  std::vector<double> sqrt_w(g.all_weights().size());
  std::transform(g.all_weights().begin(), g.all_weights().end(), sqrt_w.begin(),
                 [](double w) { return std::sqrt(w); });
  std::vector<double> vals;
  return iterate_sweeps(std::move(u), cfg, !free_nodes.empty(), [&](std::span<double> v) {
    double change = 0.0;
    for (std::size_t i : free_nodes) {
      const auto nb = g.neighbors(i);
      vals.resize(nb.size());
      for (std::size_t t = 0; t < nb.size(); ++t) vals[t] = v[nb[t]];
      const double next =
          p_harmonic_value(vals, std::span<const double>(sqrt_w).subspan(g.offset(i), nb.size()), p);
      change = std::max(change, std::abs(next - v[i]));
      v[i] = next;
    }
    return change;
  });
}

// ---------------------------------------------------------------------------

PoissonResult poisson_solve(const Graph& g, const LabelField& sources, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  if (sources.rows() != n) throw InvalidArgument("poisson_solve: source rows do not match graph size");
  if (n == 0) throw InvalidArgument("poisson_solve: empty graph");
  if (g.num_components() != 1) throw IllPosedProblem("poisson_solve: graph is disconnected");
  for (std::size_t c = 0; c < sources.cols(); ++c) {
    double sum = 0.0, mass = 0.0;
    for (double b : sources.column(c)) {
      sum += b;
      mass += std::abs(b);
    }
    if (std::abs(sum) > 1e-9 * std::max(1.0, mass)) {
      throw InvalidArgument("poisson_solve: source column " + std::to_string(c) + " does not sum to zero");
    }
  }

  PoissonResult res;
  res.u = LabelField(n, sources.cols(), 0.0);
  if (n == 1) {
    res.converged = true;
    return res;
  }
  const double total_degree = [&] {
    double s = 0.0;
    for (double d : g.degrees()) s += d;
    return s;
  }();
  const double threshold = cfg.tol * g.max_degree();
  LabelField r(n, sources.cols());

  for (std::size_t it = 0;; ++it) {
    double worst = 0.0;
    for (std::size_t c = 0; c < sources.cols(); ++c) {
      const auto u = std::as_const(res.u).column(c);
      const auto b = sources.column(c);
      auto rc = r.column(c);
      for (std::size_t i = 0; i < n; ++i) {
        const auto nb = g.neighbors(i);
        const auto w = g.weights(i);
        double lu = 0.0;
        for (std::size_t t = 0; t < nb.size(); ++t) lu += w[t] * (u[i] - u[nb[t]]);
        rc[i] = b[i] - lu;
        worst = std::max(worst, std::abs(rc[i]));
      }
    }
    res.residual = worst;
    res.iterations = it;
    if (worst <= threshold) {
      res.converged = true;
      break;
    }
    if (it == cfg.max_iter) break;
    for (std::size_t c = 0; c < sources.cols(); ++c) {
      auto u = res.u.column(c);
      const auto rc = std::as_const(r).column(c);
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        u[i] += rc[i] / g.degree(i);
        mean += g.degree(i) * u[i];
      }
      mean /= total_degree;
      for (double& v : u) v -= mean;
    }
  }
  return res;
}

}  // namespace infsl
