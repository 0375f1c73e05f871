#include "infsl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "infsl/error.hpp"

namespace infsl {

namespace {

void check_node(const Graph& g, std::span<const double> u, std::size_t i) {
  if (u.size() != g.size()) throw InvalidArgument("node function length does not match graph size");
  if (i >= g.size()) throw InvalidArgument("node index " + std::to_string(i) + " out of range");
}

void require_neighbors(const Graph& g, std::size_t i) {
  if (g.neighbors(i).empty()) throw IllPosedProblem("node " + std::to_string(i) + " is isolated");
}

double positive_part(double a) { return a > 0.0 ? a : 0.0; }

}  // namespace

double graph_laplacian(const Graph& g, std::span<const double> u, std::size_t i) {
  check_node(g, u, i);
  const auto nb = g.neighbors(i);
  const auto w = g.weights(i);
  double s = 0.0;
  for (std::size_t t = 0; t < nb.size(); ++t) s += w[t] * (u[i] - u[nb[t]]);
  return s;
}

double upwind_grad_norm(const Graph& g, std::span<const double> u, std::size_t i, Upwind dir,
                        double p) {
  check_node(g, u, i);
  if (!(p > 0.0)) throw InvalidArgument("upwind_grad_norm: p must be positive");
  const auto nb = g.neighbors(i);
  const auto w = g.weights(i);
  auto diff = [&](std::size_t t) {
    const double a = u[nb[t]] - u[i];
    return positive_part(dir == Upwind::ascent ? a : -a);
  };
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t t = 0; t < nb.size(); ++t) m = std::max(m, std::sqrt(w[t]) * diff(t));
    return m;
  }
  double s = 0.0;
  for (std::size_t t = 0; t < nb.size(); ++t) s += std::pow(w[t], p / 2.0) * std::pow(diff(t), p);
  return std::pow(s, 1.0 / p);
}

double infinity_laplacian(const Graph& g, std::span<const double> u, std::size_t i) {
  check_node(g, u, i);
  require_neighbors(g, i);
  return 0.5 * (upwind_grad_norm(g, u, i, Upwind::ascent, kInfinity) -
                upwind_grad_norm(g, u, i, Upwind::descent, kInfinity));
}

double p_laplacian(const Graph& g, std::span<const double> u, std::size_t i, double p) {
  check_node(g, u, i);
  if (!(p >= 1.0)) throw InvalidArgument("p_laplacian: p must be >= 1");
  const auto nb = g.neighbors(i);
  const auto w = g.weights(i);
  double s = 0.0;
  for (std::size_t t = 0; t < nb.size(); ++t) {
    const double diff = u[i] - u[nb[t]];
    if (diff == 0.0) continue;
    // |diff|^{p-2} diff written as sign * |diff|^{p-1}; avoids 0^{negative} for p < 2.
    s += std::pow(w[t], p / 2.0) * std::copysign(std::pow(std::abs(diff), p - 1.0), diff);
  }
  return s;
}

double holder_infinity(const Graph& g, std::span<const double> u, std::size_t i, double alpha) {
  check_node(g, u, i);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("holder_infinity: alpha outside [0,1]");
  require_neighbors(g, i);
  const auto nb = g.neighbors(i);
  const auto d = g.lengths(i);
  double hi = -kInfinity, lo = kInfinity;
  for (std::size_t t = 0; t < nb.size(); ++t) {
    const double q = (u[nb[t]] - u[i]) / std::pow(d[t], alpha);
    hi = std::max(hi, q);
    lo = std::min(lo, q);
  }
  return hi + lo;
}

}  // namespace infsl
