#include "infsl/dataset.hpp"

#include <cmath>
#include <string>

#include "infsl/error.hpp"

namespace infsl {

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes > 0 ? num_classes : 0), 0);
  for (int c : labels) ++counts.at(static_cast<std::size_t>(c));
  return counts;
}

void Dataset::validate() const {
  if (dim == 0) throw InvalidArgument("dataset dimension must be >= 1");
  if (points.empty() || points.size() % dim != 0) {
    throw InvalidArgument("dataset must hold a whole number of points (n >= 1)");
  }
  for (double v : points) {
    if (!std::isfinite(v)) throw InvalidArgument("dataset contains a non-finite coordinate");
  }
  if (labels.empty()) return;
  if (labels.size() != size()) throw InvalidArgument("label count does not match point count");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw InvalidArgument("label of point " + std::to_string(i) + " outside [0, k)");
    }
  }
}

}  // namespace infsl
