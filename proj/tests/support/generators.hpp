#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <random>
#include <vector>

#include "tsvar/analytic_scale.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/grid_scale.hpp"

namespace tsvar::testing {

/// Random bounded grid with controlled spacing (no guard violations):
/// gaps are drawn from [0.01, 1.0], start point from [-2, 2].
inline GridScale random_scale(std::mt19937_64& rng, std::size_t min_n = 3,
                              std::size_t max_n = 50) {
  std::uniform_int_distribution<std::size_t> nd(min_n, max_n);
  std::uniform_real_distribution<double> start(-2.0, 2.0);
  std::uniform_real_distribution<double> gap(0.01, 1.0);
  const std::size_t n = nd(rng);
  std::vector<double> pts(n);
  pts[0] = start(rng);
  for (std::size_t k = 1; k < n; ++k) {
    pts[k] = pts[k - 1] + gap(rng);
  }
  return GridScale::from_points(std::move(pts));
}

/// Random structural scale: 1-3 non-overlapping cells drawn left to right,
/// mixing intervals, point lists and sequence families (both sides, all
/// closed-form kinds, occasionally capped).  Cells may touch.
inline AnalyticScale random_analytic_scale(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cell_count(1, 3);
  std::uniform_int_distribution<int> cell_type(0, 2);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> start(-3.0, 0.0);
  std::uniform_real_distribution<double> extent(0.4, 1.5);
  std::uniform_real_distribution<double> gap(0.0, 0.5);
  std::uniform_int_distribution<std::size_t> list_len(3, 6);
  std::uniform_int_distribution<std::size_t> cap(4, 9);
  std::uniform_real_distribution<double> ratio(1.3, 4.0);
  std::uniform_real_distribution<double> exponent(0.5, 3.0);

  const int n = cell_count(rng);
  std::vector<ScaleCell> cells;
  double x = start(rng);
  for (int i = 0; i < n; ++i) {
    const double w = extent(rng);
    switch (cell_type(rng)) {
      case 0:
        cells.push_back(IntervalCell{x, x + w});
        break;
      case 1: {
        const std::size_t m = list_len(rng);
        std::vector<double> pts(m);
        for (std::size_t j = 0; j < m; ++j) {
          pts[j] = x + w * static_cast<double>(j) / static_cast<double>(m - 1);
        }
        cells.push_back(PointListCell{std::move(pts)});
        break;
      }
      default: {
        SequenceCell f;
        switch (kind_pick(rng)) {
          case 0:
            f.kind = SequenceKind::geometric;
            f.ratio = ratio(rng);
            break;
          case 1:
            f.kind = SequenceKind::power;
            f.exponent = exponent(rng);
            break;
          default:
            f.kind = SequenceKind::factorial;
            break;
        }
        f.side = coin(rng) ? SequenceSide::above : SequenceSide::below;
        f.amplitude = w;
        f.accumulation = f.side == SequenceSide::above ? x : x + w;
        if (coin(rng) == 0) {
          f.max_index = cap(rng);
        }
        cells.push_back(std::move(f));
        break;
      }
    }
    x += w + gap(rng);
  }
  return AnalyticScale::from_cells(std::move(cells));
}

/// Full-coverage random function with values in [-amplitude, amplitude].
inline GridFunction random_function(std::mt19937_64& rng,
                                    const GridScale& scale,
                                    Eigen::Index dim = 1,
                                    double amplitude = 1.0) {
  std::uniform_real_distribution<double> val(-amplitude, amplitude);
  Eigen::MatrixXd m(scale.size(), dim);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = val(rng);
    }
  }
  return GridFunction(scale, std::move(m));
}

}  // namespace tsvar::testing
