#pragma once

#include <Eigen/Core>

#include <cmath>

namespace tsvar {

/**
 * Neumaier-compensated accumulator for scalar sums.
 *
 * Keeps a running error term so that long sums of mixed-magnitude terms
 * (e.g. graininesses of a strongly graded grid) stay accurate to a few ulps
 * of the true result instead of growing an O(n) rounding error.
 */
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  /// Best available estimate of the accumulated sum.
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Component-wise compensated accumulator for fixed-size vector sums.
class CompensatedVectorSum {
 public:
  explicit CompensatedVectorSum(Eigen::Index dim)
      : sum_(Eigen::VectorXd::Zero(dim)), comp_(Eigen::VectorXd::Zero(dim)) {}

  void add(const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < sum_.size(); ++i) {
      const double s = sum_[i];
      const double t = s + x[i];
      if (std::abs(s) >= std::abs(x[i])) {
        comp_[i] += (s - t) + x[i];
      } else {
        comp_[i] += (x[i] - t) + s;
      }
      sum_[i] = t;
    }
  }

  [[nodiscard]] Eigen::VectorXd value() const { return sum_ + comp_; }

 private:
  Eigen::VectorXd sum_;
  Eigen::VectorXd comp_;
};

}  // namespace tsvar
