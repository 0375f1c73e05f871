#pragma once

// Scalar boundary-value solvers on graphs: minimal Lipschitz extension,
// explicit infinity-Laplacian evolution, Laplace, p-Laplace and Poisson.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "infsl/graph.hpp"
#include "infsl/label_field.hpp"

namespace infsl {

/// Dirichlet data: sorted labeled node set and the prescribed values.
struct BoundaryData {
  std::vector<std::size_t> indices;
  std::vector<double> values;

  /// Throws InvalidArgument unless indices are strictly increasing, in
  /// range for `n` nodes, nonempty, and values are finite and aligned.
  void validate(std::size_t n) const;
};

/// Where the Lipschitz update takes its edge lengths from.
///   graph_length: d_ij = 1/sqrt(w_ij), so fixed points of the update are
///                 exactly the zeros of the weighted infinity Laplacian.
///   euclidean:    the lengths stored on the graph.
enum class LengthMode { graph_length, euclidean };

struct SolverConfig {
  double tol = 1e-6;
  std::size_t max_iter = 100000;
  std::optional<double> dt;  ///< evolution step; default 0.9 / max sqrt(w)
  LengthMode length_mode = LengthMode::graph_length;

  void validate() const;
};

struct SolveResult {
  std::vector<double> u;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Single-node minimal Lipschitz update shared by lipschitz_solve and the
/// segregated multi-class scheme. Holds the per-edge lengths for the
/// chosen LengthMode.
class LipschitzUpdate {
 public:
  LipschitzUpdate(const Graph& g, LengthMode mode);

  /// Value minimizing max_j |v - u_j| / d_ij over v, computed from the
  /// neighbor pair (r, s) maximizing |u_r - u_s| / (d_ir + d_is); r = s is
  /// allowed and ties keep the lexicographically smallest pair.
  double value_at(std::span<const double> u, std::size_t i) const;

  /// One in-place Gauss-Seidel pass over `free_nodes` in the given order.
  /// Returns the largest absolute change.
  double sweep(std::span<double> u, std::span<const std::size_t> free_nodes) const;

 private:
  const Graph* graph_;
  std::vector<double> lengths_;
  std::vector<std::size_t> pair_offsets_;
  std::vector<double> inv_pair_;
};

/// Minimal Lipschitz extension of the boundary data (Gauss-Seidel on the
/// Lipschitz update, ascending node order, from u = 0 off the boundary).
SolveResult lipschitz_solve(const Graph& g, const BoundaryData& bd, const SolverConfig& cfg);

/// Explicit forward Euler on du/dt = infinity Laplacian, from u0 (boundary
/// entries overwritten by g). Stops once max |dt * Lap_inf u| over free
/// nodes is <= tol.
SolveResult evolution_solve(const Graph& g, const BoundaryData& bd, std::span<const double> u0,
                            const SolverConfig& cfg);

/// Largest stable explicit step: 2 / max_i (sum of the two largest
/// sqrt(w_ij) incident to i).
double evolution_step_bound(const Graph& g);

/// Harmonic extension: Gauss-Seidel sweeps u_i <- sum_j w_ij u_j / d(x_i).
SolveResult laplace_solve(const Graph& g, const BoundaryData& bd, const SolverConfig& cfg);

/// p-harmonic extension by nodal coordinate descent on the p-Dirichlet
/// energy; each nodal problem is solved by bisection to 1e-12. p >= 2.
SolveResult p_laplace_solve(const Graph& g, const BoundaryData& bd, double p,
                            const SolverConfig& cfg);

struct PoissonResult {
  LabelField u;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< max_c || L u_c - B_c ||_inf
  bool converged = false;
};

/// Solves L u_c = B_c for every column with sum_i d(x_i) u_c(x_i) = 0, by
/// u <- u + D^{-1}(B - L u) from zero with degree-weighted re-centering
/// after each sweep. Converged once the residual is <= tol * max degree.
PoissonResult poisson_solve(const Graph& g, const LabelField& sources, const SolverConfig& cfg);

/// Stopping test shared by the iterative schemes: true once `change` is
/// <= tol and the geometric error estimate change * rho / (1 - rho), with
/// rho = change / previous, is <= tol too. `previous` is 0 on the first pass.
bool sweeps_settled(double change, double previous, double tol);

/// Throws IllPosedProblem if some connected component has no labeled node.
void require_labeled_components(const Graph& g, std::span<const std::size_t> labeled);

}  // namespace infsl
