#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "infsl/dataset.hpp"

namespace infsl {

/// Edge lengths are clamped from below so coincident points stay usable.
inline constexpr double kMinLength = 1e-12;
/// Edge weights are clamped from above for the same reason.
inline constexpr double kMaxWeight = 1e12;

/// One undirected edge. `length` is the distance d_ij used by the
/// Lipschitz update in euclidean mode; `weight` is the similarity w_ij.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 1.0;
  double length = 1.0;

  /// Edge whose length is derived from the weight as 1/sqrt(w).
  static Edge from_weight(std::size_t i, std::size_t j, double w);
};

/// Immutable sparse weighted undirected graph in CSR layout.
///
/// Adjacency lists are sorted by neighbor index. Both directions of every
/// edge are stored with bit-identical weight and length.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an undirected edge list (each edge given once,
  /// either orientation). Throws InvalidArgument on self-loops, duplicate
  /// edges, out-of-range endpoints, or weights/lengths outside
  /// (0, kMaxWeight] / [kMinLength, inf).
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return targets_.size() / 2; }

  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> lengths(std::size_t i) const {
    return {lengths_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// Offset of node i's first entry in the flat per-edge arrays.
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::span<const double> all_weights() const { return weights_; }
  std::span<const double> all_lengths() const { return lengths_; }

  double degree(std::size_t i) const { return degrees_[i]; }
  std::span<const double> degrees() const { return degrees_; }
  double max_degree() const;

  /// Each undirected edge once, i < j, in ascending (i, j) order.
  std::vector<Edge> edges() const;

  /// Component id per node, ids assigned in order of lowest member index.
  std::vector<std::size_t> components() const;
  std::size_t num_components() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
  std::vector<double> lengths_;
  std::vector<double> degrees_;
};

/// Checks symmetry, absence of self-loops, weight/length ranges and degree
/// consistency. Returns an empty string when all hold, otherwise a
/// description of the first violation.
std::string check_invariants(const Graph& g);

// ---------------------------------------------------------------------------
// Weight kernels

/// w = exp(-|xi-xj|^2 / (sigma_i sigma_j)), d = |xi-xj|, with sigma_i the
/// distance from x_i to its k_sigma-th nearest neighbor.
struct GaussianSelfTuning {
  std::size_t k_sigma = 0;  ///< 0 means "use the graph's k"
};

/// sim = (cos + 1)/2, w = sim, d = 1/sim - 1.
struct CosineAdjusted {};

/// w = 1/d^(2 alpha), d = |xi-xj|.
struct InverseDistance {
  double alpha = 1.0;
};

using WeightKernel = std::variant<GaussianSelfTuning, CosineAdjusted, InverseDistance>;

struct KernelValue {
  double weight;
  double length;
};

/// Similarity and distance between two points under `kernel`, after
/// clamping. The sigma arguments are only read by the gaussian kernel.
KernelValue kernel_weight(const WeightKernel& kernel, std::span<const double> xi,
                          std::span<const double> xj, double sigma_i = 1.0,
                          double sigma_j = 1.0);

/// Exact brute-force K-NN graph, symmetrized by edge union. Ties in the
/// neighbor ranking go to the lower node index.
Graph knn_graph(const Dataset& data, std::size_t k, const WeightKernel& kernel);

/// Per-node self-tuning scale: Euclidean distance to the rank-th nearest
/// other point (clamped to kMinLength).
std::vector<double> self_tuning_scales(const Dataset& data, std::size_t rank);

// ---------------------------------------------------------------------------
// Regular grids

enum class Stencil { four = 4, eight = 8 };

/// m x m lattice over [-1,1]^2. Node index = row * m + col, x = -1 + col*h,
/// y = -1 + row*h, h = 2/(m-1). Weights are 1/d^2.
struct GridGraph {
  Graph graph;
  std::size_t side = 0;
  std::vector<std::array<double, 2>> coords;

  bool on_boundary(std::size_t node) const;
  std::vector<std::size_t> boundary_nodes() const;
  /// Lattice node closest to (x, y); ties go to the lower index.
  std::size_t nearest(double x, double y) const;
  std::size_t center() const { return (side / 2) * side + side / 2; }
};

GridGraph grid_graph(std::size_t m, Stencil stencil);

// ---------------------------------------------------------------------------
// Edge-list text format:
//   #nodes=<n>
//   i,j,w,d        (0-based, i < j, 17 significant digits)

void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

}  // namespace infsl
