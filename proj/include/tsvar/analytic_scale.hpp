#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "tsvar/grid_scale.hpp"

namespace tsvar {

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

/// Continuum block [lo, hi] of the scale (lo < hi).
struct IntervalCell {
  double lo = 0.0;
  double hi = 1.0;
};

/// Finite list of isolated points, strictly increasing.
struct PointListCell {
  std::vector<double> points;
};

enum class SequenceKind { geometric, power, factorial, custom };
enum class SequenceSide { above, below };

[[nodiscard]] std::string_view to_label(SequenceKind k);
[[nodiscard]] std::string_view to_label(SequenceSide s);

/**
 * One-sided accumulation cell: the accumulation point p together with the
 * points p +/- amplitude * w_k, where w_k is a strictly decreasing null
 * sequence fixed by `kind`:
 *
 *   geometric  w_k = ratio^{-k}      k = 0, 1, 2, ...   (ratio > 1)
 *   power      w_k = k^{-exponent}   k = 1, 2, 3, ...   (exponent > 0)
 *   factorial  w_k = 1/k!            k = 1, 2, 3, ...
 *   custom     w_k = generator(k)    k = 1, 2, 3, ...
 *
 * side == above places the points at p + amplitude*w_k, so they decrease
 * toward p from the right; side == below mirrors them to the left.  The
 * accumulation point itself belongs to the cell.  max_index, when set,
 * truncates the sequence at that term index (inclusive), making the cell a
 * finite point set.
 */
struct SequenceCell {
  SequenceKind kind = SequenceKind::geometric;
  SequenceSide side = SequenceSide::above;
  double accumulation = 0.0;
  double ratio = 2.0;
  double exponent = 1.0;
  double amplitude = 1.0;
  std::optional<std::size_t> max_index;
  std::function<double(std::size_t)> generator;

  /// Index of the first (farthest) term of the null sequence.
  [[nodiscard]] std::size_t first_index() const noexcept {
    return kind == SequenceKind::geometric ? 0 : 1;
  }

  /// w_k for k >= first_index().
  [[nodiscard]] double distance(std::size_t k) const;

  /// The scale point realised by term k.
  [[nodiscard]] double point(std::size_t k) const;

  /// The point farthest from the accumulation point.
  [[nodiscard]] double extreme_point() const { return point(first_index()); }

  [[nodiscard]] double min_point() const {
    return side == SequenceSide::above ? accumulation : extreme_point();
  }
  [[nodiscard]] double max_point() const {
    return side == SequenceSide::above ? extreme_point() : accumulation;
  }
};

using ScaleCell = std::variant<IntervalCell, PointListCell, SequenceCell>;

/// Thrown when answering a query would require generating more sequence
/// terms than the per-family iteration cap (point too close to an
/// accumulation point of a custom family).
class ScaleResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// AnalyticScale
// ---------------------------------------------------------------------------

/**
 * A bounded time scale described structurally as an ordered union of cells
 * (intervals, finite point lists, accumulation families).  Cells may touch
 * at single points but must not overlap.  Because density information is
 * carried by the cell structure, classification queries are answered
 * symbolically - never by sampling floating-point neighbourhoods.
 */
class AnalyticScale {
 public:
  /// Validates cell parameters, ordering and total cardinality (>= 3).
  static AnalyticScale from_cells(std::vector<ScaleCell> cells);

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] const std::vector<ScaleCell>& cells() const noexcept {
    return cells_;
  }

  /// Exact membership: t must be one of the generated points, lie in an
  /// interval cell, or be an accumulation point.
  [[nodiscard]] bool contains(double t) const;

  /// How the scale approaches a point from one side.
  enum class Approach { none, interval, family };

  struct LocalStructure {
    bool member = false;
    Approach left = Approach::none;
    Approach right = Approach::none;
    const SequenceCell* left_family = nullptr;
    const SequenceCell* right_family = nullptr;
    /// Greatest scale point < t; set only when left == none and one exists.
    std::optional<double> prev;
    /// Least scale point > t; set only when right == none and one exists.
    std::optional<double> next;
  };

  [[nodiscard]] LocalStructure local_structure(double t) const;

  /// Forward jump sigma(t) = inf{s in T : s > t}, with sigma(b) = b.
  /// Throws std::domain_error when t is not in the scale.
  [[nodiscard]] double sigma(double t) const;

  /// Backward jump rho(t) = sup{s in T : s < t}, with rho(a) = a.
  [[nodiscard]] double rho(double t) const;

  /// Structural sample of the scale: interval endpoints and midpoints, all
  /// listed points, accumulation points, and the first terms_per_family
  /// terms of every sequence cell.  Sorted, deduplicated.  Every point at
  /// which a regularity transition can occur is included.
  [[nodiscard]] std::vector<double> notable_points(
      std::size_t terms_per_family = 4) const;

 private:
  AnalyticScale(std::vector<ScaleCell> cells, double a, double b)
      : cells_(std::move(cells)), a_(a), b_(b) {}

  std::vector<ScaleCell> cells_;
  double a_ = 0.0;
  double b_ = 0.0;
};

// ---------------------------------------------------------------------------
// Truncation to a finite grid
// ---------------------------------------------------------------------------

struct TruncationResult {
  GridScale grid;
  /// Grid indices that realise accumulation points of the analytic scale.
  std::map<std::size_t, double> accumulation_indices;
};

/**
 * Materialises a finite grid from an analytic scale.  Interval cells are
 * sampled uniformly with interval_resolution points; sequence cells share
 * `budget` grid points in total, always containing every accumulation point
 * and every extreme term, with the remaining slots handed out to the terms
 * farthest from their accumulation points first.  Throws
 * std::invalid_argument when budget < 3, when the budget cannot cover the
 * mandatory points, or when the resulting grid violates GridScale's
 * spacing guard.
 */
[[nodiscard]] TruncationResult truncate_to_grid(const AnalyticScale& scale,
                                                std::size_t budget,
                                                std::size_t interval_resolution);

}  // namespace tsvar
