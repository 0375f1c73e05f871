#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace infsl {

/// n x k real matrix, one column per class. Stored column-major so every
/// class function u_c is a contiguous span the scalar solvers can work on.
class LabelField {
 public:
  LabelField() = default;
  LabelField(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t c) { return values_[c * rows_ + i]; }
  double operator()(std::size_t i, std::size_t c) const { return values_[c * rows_ + i]; }

  std::span<double> column(std::size_t c) { return {values_.data() + c * rows_, rows_}; }
  std::span<const double> column(std::size_t c) const { return {values_.data() + c * rows_, rows_}; }

  std::span<const double> data() const { return values_; }

  friend bool operator==(const LabelField&, const LabelField&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace infsl
