#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace infsl {

/// Row-major n x d feature matrix with optional ground-truth labels.
///
/// `labels` is either empty (unlabeled data) or has exactly `size()` entries,
/// each in [0, num_classes). `class_names` optionally records the original
/// class identifiers (CSV ids, KEEL tags) in dense-index order.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> points;
  std::vector<int> labels;
  int num_classes = 0;
  std::vector<std::string> class_names;

  std::size_t size() const { return dim == 0 ? 0 : points.size() / dim; }
  bool has_labels() const { return !labels.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, dim};
  }

  /// Number of samples carrying each class label.
  std::vector<std::size_t> class_counts() const;

  /// Throws InvalidArgument when the shape or labels are inconsistent.
  void validate() const;
};

}  // namespace infsl
