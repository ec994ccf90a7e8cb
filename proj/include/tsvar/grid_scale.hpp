#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsvar {

/**
 * Classification of a time-scale point by its neighbourhood structure.
 *
 * A point is right-scattered (RS) when the forward jump moves off it,
 * right-dense (RD) when it does not; mirrored for left-scattered (LS) /
 * left-dense (LD).  The endpoint conventions rho(a) = a and sigma(b) = b
 * make the minimum left-dense and the maximum right-dense even though no
 * actual accumulation happens there.
 */
struct PointClass {
  bool right_scattered = false;
  bool left_scattered = false;

  [[nodiscard]] bool right_dense() const noexcept { return !right_scattered; }
  [[nodiscard]] bool left_dense() const noexcept { return !left_scattered; }
  [[nodiscard]] bool isolated() const noexcept {
    return right_scattered && left_scattered;
  }

  friend bool operator==(const PointClass&, const PointClass&) = default;

  /// Compact human-readable tag, e.g. "RS|LD".
  [[nodiscard]] std::string label() const {
    std::string s = right_scattered ? "RS" : "RD";
    s += '|';
    s += left_scattered ? "LS" : "LD";
    return s;
  }
};

/**
 * A bounded time scale realised as a finite strictly increasing grid
 * t_0 < t_1 < ... < t_{N-1} with N >= 3.
 *
 * All jump operators have closed forms here: sigma(t_k) = t_{min(k+1,N-1)},
 * rho(t_k) = t_{max(k-1,0)}, forward graininess mu = sigma(t) - t and
 * backward graininess nu = t - rho(t).  The three derived domains are kept
 * as index ranges:
 *
 *   T^kappa        indices [0, N-1)   (drop the maximum)
 *   T_kappa        indices [1, N)     (drop the minimum)
 *   T^kappa_kappa  indices [1, N-1)   (interior)
 *
 * Copying a GridScale is cheap: instances share their immutable point
 * vector, so passing scales by value is the normal calling convention.
 */
class GridScale {
 public:
  /// Minimum admissible spacing, relative to the total span: grids this
  /// tight are numerically indistinguishable from coincident points for
  /// difference quotients, so construction refuses them.
  static constexpr double kMinSpacingFactor =
      1e3 * std::numeric_limits<double>::epsilon();

  /// Validates and adopts an increasing point vector.
  /// Throws std::invalid_argument on fewer than 3 points, non-monotone
  /// input, or spacing below kMinSpacingFactor * (b - a).
  static GridScale from_points(std::vector<double> points) {
    if (points.size() < 3) {
      throw std::invalid_argument(
          "GridScale: need at least 3 points, got " +
          std::to_string(points.size()));
    }
    const double span = points.back() - points.front();
    if (!(span > 0.0)) {
      throw std::invalid_argument("GridScale: points must be increasing");
    }
    const double min_spacing = kMinSpacingFactor * span;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
      const double gap = points[k + 1] - points[k];
      if (!(gap > 0.0)) {
        throw std::invalid_argument(
            "GridScale: points must be strictly increasing (violated at index " +
            std::to_string(k) + ")");
      }
      if (gap < min_spacing) {
        throw std::invalid_argument(
            "GridScale: spacing " + std::to_string(gap) + " at index " +
            std::to_string(k) + " is below the resolvable minimum " +
            std::to_string(min_spacing));
      }
    }
    return GridScale(std::move(points));
  }

  /// Uniform grid with n points on [a, b].
  static GridScale uniform(double a, double b, std::size_t n) {
    if (!(b > a)) {
      throw std::invalid_argument("GridScale::uniform: need a < b");
    }
    if (n < 3) {
      throw std::invalid_argument("GridScale::uniform: need n >= 3");
    }
    std::vector<double> pts(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      pts[k] = a + h * static_cast<double>(k);
    }
    pts.back() = b;
    return from_points(std::move(pts));
  }

  [[nodiscard]] std::size_t size() const noexcept { return pts_->size(); }
  [[nodiscard]] double a() const noexcept { return pts_->front(); }
  [[nodiscard]] double b() const noexcept { return pts_->back(); }
  [[nodiscard]] std::span<const double> points() const noexcept {
    return {pts_->data(), pts_->size()};
  }

  [[nodiscard]] double operator[](std::size_t k) const {
    check_index(k);
    return (*pts_)[k];
  }

  /// Forward jump sigma(t_k); sigma(b) = b.
  [[nodiscard]] double sigma(std::size_t k) const {
    check_index(k);
    return (*pts_)[std::min(k + 1, pts_->size() - 1)];
  }

  /// Backward jump rho(t_k); rho(a) = a.
  [[nodiscard]] double rho(std::size_t k) const {
    check_index(k);
    return (*pts_)[k == 0 ? 0 : k - 1];
  }

  /// Forward graininess mu(t_k) = sigma(t_k) - t_k; zero at the maximum.
  [[nodiscard]] double mu(std::size_t k) const { return sigma(k) - (*pts_)[k]; }

  /// Backward graininess nu(t_k) = t_k - rho(t_k); zero at the minimum.
  [[nodiscard]] double nu(std::size_t k) const { return (*pts_)[k] - rho(k); }

  /// Nabla-derivative of the forward jump at an interior-or-last index:
  /// sigma^nabla(t_k) = mu(t_k) / nu(t_k) for k in T_kappa.  At k = N-1 this
  /// is 0 because mu(b) = 0.  Throws std::domain_error at k = 0, which lies
  /// outside T_kappa on a grid (the minimum is always right-scattered).
  [[nodiscard]] double sigma_nabla(std::size_t k) const {
    check_index(k);
    if (k == 0) {
      throw std::domain_error(
          "GridScale::sigma_nabla: index 0 is outside T_kappa");
    }
    return mu(k) / nu(k);
  }

  /// Point class with the endpoint conventions (minimum is LD, maximum RD).
  [[nodiscard]] PointClass classify(std::size_t k) const {
    check_index(k);
    PointClass c;
    c.right_scattered = (k + 1 < pts_->size());
    c.left_scattered = (k > 0);
    return c;
  }

  /// Index ranges for the restricted domains (half-open).
  [[nodiscard]] std::size_t kappa_end() const noexcept {
    return pts_->size() - 1;  // T^kappa = [0, N-1)
  }
  [[nodiscard]] std::size_t kappa_begin() const noexcept {
    return 1;  // T_kappa = [1, N)
  }

  /// True when both scales view the same points (shared storage or equal
  /// values); used as the alignment precondition for binary operations.
  [[nodiscard]] bool aligned_with(const GridScale& other) const {
    return pts_ == other.pts_ || *pts_ == *other.pts_;
  }

 private:
  explicit GridScale(std::vector<double> pts)
      : pts_(std::make_shared<const std::vector<double>>(std::move(pts))) {}

  void check_index(std::size_t k) const {
    if (k >= pts_->size()) {
      throw std::out_of_range("GridScale: index " + std::to_string(k) +
                              " out of range [0, " +
                              std::to_string(pts_->size()) + ")");
    }
  }

  std::shared_ptr<const std::vector<double>> pts_;
};

}  // namespace tsvar
