#include "infsl/demo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "infsl/error.hpp"
#include "infsl/text.hpp"

namespace infsl {

void DemoSpec::validate() const {
  if (m < 3 || m % 2 == 0) throw InvalidArgument("demo grid side must be odd and >= 3");
}

std::string_view to_string(DemoMode mode) {
  return mode == DemoMode::laplace ? "laplace" : "infinity";
}

std::string_view to_string(SourceLayout layout) {
  return layout == SourceLayout::center_one ? "center_one" : "ring_plus_center";
}

std::optional<DemoMode> parse_demo_mode(std::string_view name) {
  if (name == "laplace") return DemoMode::laplace;
  if (name == "infinity") return DemoMode::infinity;
  return std::nullopt;
}

std::optional<SourceLayout> parse_source_layout(std::string_view name) {
  if (name == "center_one") return SourceLayout::center_one;
  if (name == "ring_plus_center") return SourceLayout::ring_plus_center;
  return std::nullopt;
}

BoundaryData demo_boundary(const GridGraph& grid, SourceLayout layout) {
  std::map<std::size_t, double> fixed;
  for (std::size_t v : grid.boundary_nodes()) fixed[v] = 0.0;
  const std::size_t center = grid.center();
  if (layout == SourceLayout::center_one) {
    fixed[center] = 1.0;
  } else {
    fixed[center] = -1.0;
    for (int q = 0; q < 10; ++q) {
      const double a = 2.0 * std::numbers::pi * q / 10.0;
      const std::size_t v = grid.nearest(0.8 * std::cos(a), 0.8 * std::sin(a));
      if (grid.on_boundary(v) || v == center || fixed.count(v) != 0) {
        throw InvalidArgument("grid side " + std::to_string(grid.side) +
                              " is too coarse for the ring layout");
      }
      fixed[v] = 1.0;
    }
  }
  BoundaryData bd;
  for (auto [v, value] : fixed) {
    bd.indices.push_back(v);
    bd.values.push_back(value);
  }
  return bd;
}

DemoResult pde_demo(const DemoSpec& spec, const SolverConfig& cfg) {
  spec.validate();
  DemoResult out;
  out.grid = grid_graph(spec.m, spec.stencil);
  out.boundary = demo_boundary(out.grid, spec.layout);
  out.solve = spec.mode == DemoMode::laplace ? laplace_solve(out.grid.graph, out.boundary, cfg)
                                             : lipschitz_solve(out.grid.graph, out.boundary, cfg);
  return out;
}

void write_field_csv(std::ostream& os, std::span<const double> field, std::size_t m) {
  if (field.size() != m * m) throw InvalidArgument("field size is not m * m");
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t col = 0; col < m; ++col) {
      if (col) os << ',';
      os << text::format_double(field[row * m + col]);
    }
    os << '\n';
  }
}

}  // namespace infsl
