#pragma once

// Point-source boundary problems on the square [-1,1]^2, solved on a grid
// graph with either the harmonic or the minimal Lipschitz extension.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "infsl/graph.hpp"
#include "infsl/solvers.hpp"

namespace infsl {

enum class DemoMode { laplace, infinity };

/// center_one:       u = 1 at the center node.
/// ring_plus_center: u = +1 at the 10 nodes nearest to the radius-0.8
///                   points at angles 2 pi q / 10, u = -1 at the center.
/// In both layouts u = 0 on the outer boundary of the grid.
enum class SourceLayout { center_one, ring_plus_center };

struct DemoSpec {
  std::size_t m = 101;  ///< grid side; odd and >= 3
  Stencil stencil = Stencil::eight;
  DemoMode mode = DemoMode::infinity;
  SourceLayout layout = SourceLayout::center_one;

  void validate() const;
};

std::string_view to_string(DemoMode mode);
std::string_view to_string(SourceLayout layout);
std::optional<DemoMode> parse_demo_mode(std::string_view name);
std::optional<SourceLayout> parse_source_layout(std::string_view name);

struct DemoResult {
  GridGraph grid;
  BoundaryData boundary;  ///< outer boundary plus sources
  SolveResult solve;
};

/// Dirichlet data for the layout on `grid`. Throws InvalidArgument when the
/// grid is too coarse to place the ring on distinct interior nodes.
BoundaryData demo_boundary(const GridGraph& grid, SourceLayout layout);

DemoResult pde_demo(const DemoSpec& spec, const SolverConfig& cfg);

/// m lines of m comma-separated values; line r holds grid row r (fixed y).
void write_field_csv(std::ostream& os, std::span<const double> field, std::size_t m);

}  // namespace infsl
