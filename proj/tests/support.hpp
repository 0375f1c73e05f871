#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls the solver or operator code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "infsl/dataset.hpp"
#include "infsl/graph.hpp"

namespace test {

inline infsl::Graph path_graph(const std::vector<double>& weights, const std::vector<double>& lengths) {
  std::vector<infsl::Edge> e;
  for (std::size_t t = 0; t < weights.size(); ++t) e.push_back({t, t + 1, weights[t], lengths[t]});
  return infsl::Graph::from_edges(weights.size() + 1, e);
}

inline infsl::Graph unit_path(std::size_t n) {
  return path_graph(std::vector<double>(n - 1, 1.0), std::vector<double>(n - 1, 1.0));
}

/// Path through the given 1-D positions with w = 1/d^2.
inline infsl::Graph positioned_path(const std::vector<double>& x) {
  std::vector<double> w, d;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    d.push_back(x[t + 1] - x[t]);
    w.push_back(1.0 / (d.back() * d.back()));
  }
  return path_graph(w, d);
}

/// Star with center 0 and `leaves` unit-weight leaves 1..leaves.
inline infsl::Graph star(std::size_t leaves) {
  std::vector<infsl::Edge> e;
  for (std::size_t t = 1; t <= leaves; ++t) e.push_back({0, t, 1.0, 1.0});
  return infsl::Graph::from_edges(leaves + 1, e);
}

inline infsl::Dataset uniform_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  infsl::Dataset d;
  d.dim = dim;
  for (std::size_t i = 0; i < n * dim; ++i) d.points.push_back(u(rng));
  return d;
}

/// Random connected weighted graph: a random spanning tree plus extra edges.
inline infsl::Graph random_connected_graph(std::size_t n, std::size_t extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wdist(0.1, 2.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    pairs.emplace_back(pick(rng), i);
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t t = 0; t < extra; ++t) {
    std::size_t a = any(rng), b = any(rng);
    if (a == b) continue;
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<infsl::Edge> edges;
  for (auto [a, b] : pairs) {
    const double w = wdist(rng);
    edges.push_back({a, b, w, 1.0 / std::sqrt(w)});
  }
  return infsl::Graph::from_edges(n, edges);
}

/// Minimizer over a uniform grid on [lo, hi] of max_j |v - u_j| / d_j
/// (the local Lipschitz constant at a node), by exhaustive search.
inline double brute_force_lipschitz_value(const std::vector<double>& u, const std::vector<double>& d,
                                          double lo, double hi, std::size_t steps) {
  double best_v = lo, best = INFINITY;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double v = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps);
    double lip = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) lip = std::max(lip, std::abs(v - u[j]) / d[j]);
    if (lip < best) {
      best = lip;
      best_v = v;
    }
  }
  return best_v;
}

/// Directed k-NN relation by full sort of squared distances (ties by index).
inline std::vector<std::vector<std::size_t>> naive_knn(const infsl::Dataset& data, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (std::size_t t = 0; t < data.dim; ++t) {
        const double diff = data.point(i)[t] - data.point(j)[t];
        s += diff * diff;
      }
      all.emplace_back(s, j);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t t = 0; t < k; ++t) out[i].push_back(all[t].second);
  }
  return out;
}

/// Fresh empty directory under the system temp path.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("infsl_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& s) {
  std::ofstream os(p, std::ios::binary);
  os << s;
}

}  // namespace test
