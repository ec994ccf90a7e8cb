#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "tsvar/grid_scale.hpp"

namespace tsvar {

/**
 * A vector-valued function sampled on (a window of) a GridScale.
 *
 * Values are stored row-per-point: row r holds u(t_{first+r}) in R^n.
 * Derivative operators shrink the window instead of padding: the
 * delta-derivative of a function covering indices [first, end) covers
 * [first, end-1), the nabla-derivative covers [first+1, end).  A value
 * outside the window is simply not defined, and asking for it throws.
 */
class GridFunction {
 public:
  /// Full-coverage function: one row per scale point.
  GridFunction(GridScale scale, Eigen::MatrixXd values)
      : GridFunction(std::move(scale), 0, std::move(values), FullTag{}) {}

  /// Windowed function starting at scale index `first`.
  GridFunction(GridScale scale, std::size_t first, Eigen::MatrixXd values)
      : scale_(std::move(scale)), first_(first), values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
      throw std::invalid_argument("GridFunction: empty value matrix");
    }
    if (first_ + static_cast<std::size_t>(values_.rows()) > scale_.size()) {
      throw std::invalid_argument(
          "GridFunction: window [" + std::to_string(first_) + ", " +
          std::to_string(first_ + values_.rows()) + ") exceeds scale size " +
          std::to_string(scale_.size()));
    }
  }

  /// Samples f : t -> R^dim at every scale point.
  static GridFunction sample(const GridScale& scale, Eigen::Index dim,
                             const std::function<Eigen::VectorXd(double)>& f) {
    Eigen::MatrixXd vals(scale.size(), dim);
    for (std::size_t k = 0; k < scale.size(); ++k) {
      Eigen::VectorXd v = f(scale[k]);
      if (v.size() != dim) {
        throw std::invalid_argument(
            "GridFunction::sample: callable returned dimension " +
            std::to_string(v.size()) + ", expected " + std::to_string(dim));
      }
      vals.row(static_cast<Eigen::Index>(k)) = v.transpose();
    }
    return GridFunction(scale, std::move(vals));
  }

  /// Samples a scalar function at every scale point.
  static GridFunction sample_scalar(const GridScale& scale,
                                    const std::function<double(double)>& f) {
    Eigen::MatrixXd vals(scale.size(), 1);
    for (std::size_t k = 0; k < scale.size(); ++k) {
      vals(static_cast<Eigen::Index>(k), 0) = f(scale[k]);
    }
    return GridFunction(scale, std::move(vals));
  }

  [[nodiscard]] const GridScale& scale() const noexcept { return scale_; }
  [[nodiscard]] std::size_t first_index() const noexcept { return first_; }
  [[nodiscard]] std::size_t count() const noexcept {
    return static_cast<std::size_t>(values_.rows());
  }
  /// One past the last covered scale index.
  [[nodiscard]] std::size_t end_index() const noexcept {
    return first_ + count();
  }
  [[nodiscard]] Eigen::Index dimension() const noexcept {
    return values_.cols();
  }
  [[nodiscard]] bool full() const noexcept {
    return first_ == 0 && count() == scale_.size();
  }
  [[nodiscard]] bool covers(std::size_t k) const noexcept {
    return k >= first_ && k < end_index();
  }

  /// Value at scale index k (throws if k is outside the window).
  [[nodiscard]] Eigen::VectorXd value(std::size_t k) const {
    check_covered(k);
    return values_.row(static_cast<Eigen::Index>(k - first_)).transpose();
  }

  /// Scalar value at scale index k; requires dimension() == 1.
  [[nodiscard]] double scalar(std::size_t k) const {
    if (dimension() != 1) {
      throw std::logic_error("GridFunction::scalar: function has dimension " +
                             std::to_string(dimension()));
    }
    check_covered(k);
    return values_(static_cast<Eigen::Index>(k - first_), 0);
  }

  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept {
    return values_;
  }

  /// Mutable row access for in-place construction (no window change).
  Eigen::MatrixXd& mutable_values() noexcept { return values_; }

  void check_covered(std::size_t k) const {
    if (!covers(k)) {
      throw std::out_of_range(
          "GridFunction: scale index " + std::to_string(k) +
          " outside covered window [" + std::to_string(first_) + ", " +
          std::to_string(end_index()) + ")");
    }
  }

 private:
  struct FullTag {};
  GridFunction(GridScale scale, std::size_t first, Eigen::MatrixXd values,
               FullTag)
      : scale_(std::move(scale)), first_(first), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.rows()) != scale_.size()) {
      throw std::invalid_argument(
          "GridFunction: full-coverage constructor needs one row per scale "
          "point (" +
          std::to_string(scale_.size()) + "), got " +
          std::to_string(values_.rows()));
    }
    if (values_.cols() == 0) {
      throw std::invalid_argument("GridFunction: empty value matrix");
    }
  }

  GridScale scale_;
  std::size_t first_ = 0;
  Eigen::MatrixXd values_;
};

}  // namespace tsvar
