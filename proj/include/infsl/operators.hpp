#pragma once

// Pointwise difference operators on weighted graphs. Every operator reads
// node i and its neighbors only, so solvers can fuse them into sweeps.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "infsl/graph.hpp"

namespace infsl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Direction of a one-sided (upwind) gradient.
///   ascent:  terms (u_j - u_i)^+   (neighbors above u_i)
///   descent: terms (u_i - u_j)^+   (neighbors below u_i)
enum class Upwind { ascent, descent };

/// Unnormalized graph Laplacian: sum_j w_ij (u_i - u_j).
double graph_laplacian(const Graph& g, std::span<const double> u, std::size_t i);

/// One-sided gradient norm. Finite p: (sum_j w_ij^{p/2} (diff^+)^p)^{1/p};
/// p = kInfinity: max_j sqrt(w_ij) diff^+. Zero for isolated nodes.
double upwind_grad_norm(const Graph& g, std::span<const double> u, std::size_t i, Upwind dir,
                        double p);

/// Graph infinity Laplacian
///   1/2 [ max_j sqrt(w_ij)(u_j - u_i)^+  -  max_j sqrt(w_ij)(u_i - u_j)^+ ],
/// zero exactly when u_i sits at the weighted midrange of its neighbors.
double infinity_laplacian(const Graph& g, std::span<const double> u, std::size_t i);

/// Weighted p-Laplacian sum_j w_ij^{p/2} |u_i - u_j|^{p-2} (u_i - u_j), p >= 1.
double p_laplacian(const Graph& g, std::span<const double> u, std::size_t i, double p);

/// Hölder infinity Laplacian restricted to the graph neighborhood:
///   max_j (u_j - u_i)/d_ij^alpha + min_j (u_j - u_i)/d_ij^alpha,
/// with d_ij the stored edge length.
double holder_infinity(const Graph& g, std::span<const double> u, std::size_t i, double alpha);

/// Applies a nodal operator at every node not listed in `fixed`; fixed
/// nodes get 0. `op` is called as op(g, u, i).
template <class Op>
std::vector<double> apply_free(const Graph& g, std::span<const double> u,
                               std::span<const std::size_t> fixed, Op&& op) {
  std::vector<char> is_fixed(g.size(), 0);
  for (std::size_t i : fixed) is_fixed.at(i) = 1;
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!is_fixed[i]) out[i] = op(g, u, i);
  }
  return out;
}

}  // namespace infsl
