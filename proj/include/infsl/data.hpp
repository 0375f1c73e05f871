#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "infsl/dataset.hpp"

namespace infsl {

/// Interleaved moons: class j draws t ~ U[0, pi] and places the clean point
/// at (cos t + j, sin t) for even j or (cos t + j, 0.5 - sin t) for odd j,
/// then adds N(0, noise^2) to each coordinate. Points are emitted
/// round-robin over classes. classes = 2 is the usual two-moons set.
struct MoonSpec {
  int classes = 2;
  std::size_t points_per_class = 1000;
  double noise = 0.15;
  std::uint64_t seed = 0;
};

Dataset gen_moons(const MoonSpec& spec);

/// Noise-free point of moon j at parameter t.
std::array<double, 2> moon_point(int j, double t);

/// Comma-separated numeric rows; `#` lines and blank lines are skipped.
/// With `has_label_column` the last cell is an integer class id, remapped
/// to 0..k-1 in order of first appearance (originals kept in class_names).
Dataset read_csv(std::istream& is, bool has_label_column);
Dataset load_csv(const std::string& path, bool has_label_column);

/// Writes 17-significant-digit features, plus the dense label when present.
void write_csv(std::ostream& os, const Dataset& data);
void save_csv(const Dataset& data, const std::string& path);

struct KeelDataset {
  Dataset data;
  int minority_class = 0;
  double imbalance_ratio = 1.0;  ///< majority count / minority count

  double minority_fraction() const;
};

/// KEEL `.dat`: `@` metadata lines (only `@data` matters), `%` comments,
/// comma-separated rows ending with the class tag. Tags are trimmed and
/// compared case-insensitively; the {positive, negative} vocabulary maps to
/// {1, 0}, anything else is remapped densely in first-appearance order.
KeelDataset read_keel(std::istream& is);
KeelDataset load_keel(const std::string& path);

}  // namespace infsl
