#include "tsvar/analytic_scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tsvar {

namespace {

/// Iteration cap for scans over custom generators; analytic kinds never
/// iterate far because their index bounds are inverted in closed form.
constexpr std::size_t kCustomIterationCap = 200000;

[[noreturn]] void resolution_error(const char* what) {
  throw ScaleResolutionError(std::string("AnalyticScale: ") + what +
                             " exceeds the sequence resolution limit");
}

double factorial_distance(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) {
    f *= static_cast<double>(i);
  }
  return 1.0 / f;
}

}  // namespace

std::string_view to_label(SequenceKind k) {
  switch (k) {
    case SequenceKind::geometric: return "geometric";
    case SequenceKind::power: return "power";
    case SequenceKind::factorial: return "factorial";
    case SequenceKind::custom: return "custom";
  }
  return "?";
}

std::string_view to_label(SequenceSide s) {
  return s == SequenceSide::above ? "above" : "below";
}

double SequenceCell::distance(std::size_t k) const {
  switch (kind) {
    case SequenceKind::geometric:
      return std::pow(ratio, -static_cast<double>(k));
    case SequenceKind::power:
      return std::pow(static_cast<double>(k), -exponent);
    case SequenceKind::factorial:
      return factorial_distance(k);
    case SequenceKind::custom:
      return generator(k);
  }
  return 0.0;
}

double SequenceCell::point(std::size_t k) const {
  const double off = amplitude * distance(k);
  return side == SequenceSide::above ? accumulation + off : accumulation - off;
}

namespace {

/// Last admissible term index (cap, or a stand-in for +infinity).
std::size_t last_index(const SequenceCell& f) {
  return f.max_index.value_or(std::numeric_limits<std::size_t>::max());
}

/**
 * Smallest k >= first_index with distance(k) <= delta, for delta > 0.
 * Returns nullopt when the family is capped and no admissible term is that
 * close.  Analytic kinds invert the distance formula and then correct the
 * candidate by a few steps; custom kinds scan up to the iteration cap.
 */
std::optional<std::size_t> first_index_with_distance_leq(const SequenceCell& f,
                                                         double delta) {
  const std::size_t first = f.first_index();
  const std::size_t last = last_index(f);
  std::size_t k = first;
  switch (f.kind) {
    case SequenceKind::geometric: {
      const double raw = -std::log(delta) / std::log(f.ratio);
      if (raw > 0.0) {
        k = first + static_cast<std::size_t>(std::min(raw + 2.0, 2.0e3));
      }
      break;
    }
    case SequenceKind::power: {
      const double raw = std::pow(delta, -1.0 / f.exponent);
      if (raw > 8.0e15) {
        resolution_error("power-family index for this query");
      }
      k = std::max<std::size_t>(first, static_cast<std::size_t>(raw) + 2);
      break;
    }
    case SequenceKind::factorial: {
      while (k <= std::min<std::size_t>(last, 400) && f.distance(k) > delta) {
        ++k;
      }
      break;
    }
    case SequenceKind::custom: {
      while (k <= last && f.distance(k) > delta) {
        ++k;
        if (k - first > kCustomIterationCap) {
          resolution_error("custom-family scan for this query");
        }
      }
      break;
    }
  }
  // Correct the candidate against the actual distances (a few steps at most
  // for the analytic kinds; a no-op for the scanned kinds).
  std::size_t guard = 0;
  while (k > first && f.distance(k - 1) <= delta) {
    --k;
    if (++guard > 128) {
      resolution_error("index correction");
    }
  }
  guard = 0;
  while (f.distance(k) > delta) {
    ++k;
    if (k > last) {
      return std::nullopt;
    }
    if (++guard > 128) {
      resolution_error("index correction");
    }
  }
  if (k > last) {
    return std::nullopt;  // the crossing lies beyond a capped family
  }
  return k;
}

bool family_contains(const SequenceCell& f, double t) {
  if (t == f.accumulation) {
    return true;
  }
  const double s =
      f.side == SequenceSide::above ? t - f.accumulation : f.accumulation - t;
  if (!(s > 0.0)) {
    return false;
  }
  const double delta = s / f.amplitude;
  const auto k0 = first_index_with_distance_leq(f, delta);
  const std::size_t first = f.first_index();
  const std::size_t last = last_index(f);
  // A matching term has distance within a rounding of delta; check a small
  // index neighbourhood around the crossing.
  const std::size_t centre = k0 ? *k0 : last;
  const std::size_t lo = centre >= first + 2 ? centre - 2 : first;
  const std::size_t hi = (last - centre <= 2) ? last : centre + 2;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (f.point(k) == t) {
      return true;
    }
  }
  return false;
}

/// Greatest family element strictly below t, if any.  The index inversion
/// only seeds the search; the answer is always settled by comparing actual
/// generated points, so rounding in the inversion cannot leak through.
std::optional<double> family_sup_below(const SequenceCell& f, double t) {
  const std::size_t first = f.first_index();
  const std::size_t last = last_index(f);
  const double p = f.accumulation;
  std::size_t guard = 0;
  if (f.side == SequenceSide::above) {
    // Elements {p} u {terms decreasing toward p from above}.
    if (!(t > p)) {
      return std::nullopt;
    }
    const double delta = (t - p) / f.amplitude;
    const auto k0 = first_index_with_distance_leq(f, delta);
    std::size_t k = k0.value_or(last);  // nullopt only for capped families
    while (k > first && f.point(k - 1) <= t) {
      --k;
      if (++guard > 128) resolution_error("neighbour search");
    }
    while (k <= last && f.point(k) > t) {
      ++k;
      if (++guard > 128) resolution_error("neighbour search");
    }
    if (k > last) {
      return p;  // capped: every term lies above t
    }
    if (f.point(k) < t) {
      return f.point(k);
    }
    // point(k) == t: the next smaller element.
    return k + 1 <= last ? std::optional<double>(f.point(k + 1))
                         : std::optional<double>(p);
  }
  // side == below: elements {terms increasing toward p from below} u {p}.
  if (t > p) {
    return p;
  }
  if (t == p) {
    return f.max_index ? std::optional<double>(f.point(last)) : std::nullopt;
  }
  if (!(t > f.extreme_point())) {
    return std::nullopt;
  }
  const double delta = (p - t) / f.amplitude;
  const auto k0 = first_index_with_distance_leq(f, delta);
  std::size_t k = k0.value_or(last);
  while (k > first && f.point(k - 1) >= t) {
    --k;
    if (++guard > 128) resolution_error("neighbour search");
  }
  while (k <= last && f.point(k) < t) {
    ++k;
    if (++guard > 128) resolution_error("neighbour search");
  }
  if (k > last) {
    return f.point(last);  // capped: every term lies below t
  }
  // point(k) >= t: the previous term is the greatest one below t.
  return k > first ? std::optional<double>(f.point(k - 1)) : std::nullopt;
}

/// Smallest family element strictly above t, if any.
std::optional<double> family_inf_above(const SequenceCell& f, double t) {
  const std::size_t first = f.first_index();
  const std::size_t last = last_index(f);
  const double p = f.accumulation;
  std::size_t guard = 0;
  if (f.side == SequenceSide::below) {
    // Elements {terms increasing toward p} u {p}.
    if (t >= p) {
      return std::nullopt;
    }
    if (t < f.extreme_point()) {
      return f.extreme_point();
    }
    const double delta = (p - t) / f.amplitude;
    const auto k0 = first_index_with_distance_leq(f, delta);
    std::size_t k = k0.value_or(last);
    while (k > first && f.point(k - 1) >= t) {
      --k;
      if (++guard > 128) resolution_error("neighbour search");
    }
    while (k <= last && f.point(k) <= t) {
      ++k;
      if (++guard > 128) resolution_error("neighbour search");
    }
    if (k > last) {
      return p;  // capped: every term <= t; the accumulation point is next
    }
    return f.point(k);
  }
  // side == above: elements {p} u {terms decreasing toward p}.
  if (t >= f.extreme_point()) {
    return std::nullopt;
  }
  if (t < p) {
    return p;
  }
  if (t == p) {
    return f.max_index ? std::optional<double>(f.point(last)) : std::nullopt;
  }
  const double delta = (t - p) / f.amplitude;
  const auto k0 = first_index_with_distance_leq(f, delta);
  std::size_t k = k0.value_or(last);
  while (k > first && f.point(k - 1) <= t) {
    --k;
    if (++guard > 128) resolution_error("neighbour search");
  }
  while (k <= last && f.point(k) > t) {
    ++k;
    if (++guard > 128) resolution_error("neighbour search");
  }
  if (k > last) {
    return f.point(last);  // capped: every term lies above t
  }
  // point(k) <= t < point(k-1), and k > first because t < extreme_point().
  return k > first ? std::optional<double>(f.point(k - 1)) : std::nullopt;
}

bool cell_contains(const ScaleCell& cell, double t) {
  return std::visit(
      [&](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IntervalCell>) {
          return c.lo <= t && t <= c.hi;
        } else if constexpr (std::is_same_v<T, PointListCell>) {
          return std::binary_search(c.points.begin(), c.points.end(), t);
        } else {
          return family_contains(c, t);
        }
      },
      cell);
}

std::optional<double> cell_sup_below(const ScaleCell& cell, double t) {
  return std::visit(
      [&](const auto& c) -> std::optional<double> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IntervalCell>) {
          if (t > c.hi) {
            return c.hi;
          }
          return std::nullopt;  // dense below t, or cell entirely above t
        } else if constexpr (std::is_same_v<T, PointListCell>) {
          auto it = std::lower_bound(c.points.begin(), c.points.end(), t);
          if (it == c.points.begin()) {
            return std::nullopt;
          }
          return *std::prev(it);
        } else {
          return family_sup_below(c, t);
        }
      },
      cell);
}

std::optional<double> cell_inf_above(const ScaleCell& cell, double t) {
  return std::visit(
      [&](const auto& c) -> std::optional<double> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IntervalCell>) {
          if (t < c.lo) {
            return c.lo;
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, PointListCell>) {
          auto it = std::upper_bound(c.points.begin(), c.points.end(), t);
          if (it == c.points.end()) {
            return std::nullopt;
          }
          return *it;
        } else {
          return family_inf_above(c, t);
        }
      },
      cell);
}

double cell_min(const ScaleCell& cell) {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IntervalCell>) {
          return c.lo;
        } else if constexpr (std::is_same_v<T, PointListCell>) {
          return c.points.front();
        } else {
          return c.min_point();
        }
      },
      cell);
}

double cell_max(const ScaleCell& cell) {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IntervalCell>) {
          return c.hi;
        } else if constexpr (std::is_same_v<T, PointListCell>) {
          return c.points.back();
        } else {
          return c.max_point();
        }
      },
      cell);
}

void validate_cell(const ScaleCell& cell) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IntervalCell>) {
          if (!(c.lo < c.hi)) {
            throw std::invalid_argument(
                "AnalyticScale: interval cell needs lo < hi");
          }
        } else if constexpr (std::is_same_v<T, PointListCell>) {
          if (c.points.empty()) {
            throw std::invalid_argument(
                "AnalyticScale: point-list cell is empty");
          }
          for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
            if (!(c.points[i] < c.points[i + 1])) {
              throw std::invalid_argument(
                  "AnalyticScale: point-list cell must be strictly "
                  "increasing");
            }
          }
        } else {
          if (!(c.amplitude > 0.0)) {
            throw std::invalid_argument(
                "AnalyticScale: sequence cell needs amplitude > 0");
          }
          if (c.kind == SequenceKind::geometric && !(c.ratio > 1.0)) {
            throw std::invalid_argument(
                "AnalyticScale: geometric cell needs ratio > 1");
          }
          if (c.kind == SequenceKind::power && !(c.exponent > 0.0)) {
            throw std::invalid_argument(
                "AnalyticScale: power cell needs exponent > 0");
          }
          if (c.kind == SequenceKind::custom && !c.generator) {
            throw std::invalid_argument(
                "AnalyticScale: custom cell needs a generator");
          }
          if (c.max_index && *c.max_index < c.first_index()) {
            throw std::invalid_argument(
                "AnalyticScale: max_index below the first term index");
          }
          // Probe the first terms: strictly decreasing, positive.
          const std::size_t first = c.first_index();
          const std::size_t probe_last = std::min(last_index(c), first + 8);
          double prev = std::numeric_limits<double>::infinity();
          for (std::size_t k = first; k <= probe_last; ++k) {
            const double w = c.distance(k);
            if (!(w > 0.0) || !(w < prev)) {
              throw std::invalid_argument(
                  "AnalyticScale: sequence distances must be strictly "
                  "decreasing and positive");
            }
            prev = w;
          }
        }
      },
      cell);
}

}  // namespace

AnalyticScale AnalyticScale::from_cells(std::vector<ScaleCell> cells) {
  if (cells.empty()) {
    throw std::invalid_argument("AnalyticScale: no cells");
  }
  for (const auto& cell : cells) {
    validate_cell(cell);
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const ScaleCell& x, const ScaleCell& y) {
                     return cell_min(x) < cell_min(y);
                   });
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    if (cell_max(cells[i]) > cell_min(cells[i + 1])) {
      throw std::invalid_argument(
          "AnalyticScale: cells overlap (cell " + std::to_string(i) +
          " reaches past the start of cell " + std::to_string(i + 1) + ")");
    }
  }
  // Bounded-scale cardinality: at least three points overall.
  std::size_t finite_points = 0;
  bool infinite = false;
  for (const auto& cell : cells) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, IntervalCell>) {
            infinite = true;
          } else if constexpr (std::is_same_v<T, PointListCell>) {
            finite_points += c.points.size();
          } else {
            if (c.max_index) {
              finite_points += *c.max_index - c.first_index() + 2;
            } else {
              infinite = true;
            }
          }
        },
        cell);
  }
  if (!infinite && finite_points < 3) {
    throw std::invalid_argument(
        "AnalyticScale: scale must contain at least 3 points");
  }
  const double a = cell_min(cells.front());
  const double b = cell_max(cells.back());
  return AnalyticScale(std::move(cells), a, b);
}

bool AnalyticScale::contains(double t) const {
  return std::any_of(cells_.begin(), cells_.end(), [&](const ScaleCell& c) {
    return cell_contains(c, t);
  });
}

AnalyticScale::LocalStructure AnalyticScale::local_structure(double t) const {
  LocalStructure out;
  out.member = contains(t);
  for (const auto& cell : cells_) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, IntervalCell>) {
            if (c.lo < t && t <= c.hi) {
              out.left = Approach::interval;
            }
            if (c.lo <= t && t < c.hi) {
              out.right = Approach::interval;
            }
          } else if constexpr (std::is_same_v<T, SequenceCell>) {
            // A capped family is a finite point set: no density.
            if (t == c.accumulation && !c.max_index) {
              if (c.side == SequenceSide::below) {
                out.left = Approach::family;
                out.left_family = &c;
              } else {
                out.right = Approach::family;
                out.right_family = &c;
              }
            }
          }
        },
        cell);
  }
  if (out.left == Approach::none) {
    for (const auto& cell : cells_) {
      if (auto s = cell_sup_below(cell, t)) {
        if (!out.prev || *s > *out.prev) {
          out.prev = *s;
        }
      }
    }
  }
  if (out.right == Approach::none) {
    for (const auto& cell : cells_) {
      if (auto s = cell_inf_above(cell, t)) {
        if (!out.next || *s < *out.next) {
          out.next = *s;
        }
      }
    }
  }
  return out;
}

double AnalyticScale::sigma(double t) const {
  const LocalStructure local = local_structure(t);
  if (!local.member) {
    throw std::domain_error("AnalyticScale::sigma: point is not in the scale");
  }
  if (local.right != Approach::none || t == b_ || !local.next) {
    return t;  // right-dense, or the conventional sigma(b) = b
  }
  return *local.next;
}

double AnalyticScale::rho(double t) const {
  const LocalStructure local = local_structure(t);
  if (!local.member) {
    throw std::domain_error("AnalyticScale::rho: point is not in the scale");
  }
  if (local.left != Approach::none || t == a_ || !local.prev) {
    return t;  // left-dense, or the conventional rho(a) = a
  }
  return *local.prev;
}

std::vector<double> AnalyticScale::notable_points(
    std::size_t terms_per_family) const {
  std::vector<double> pts;
  for (const auto& cell : cells_) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, IntervalCell>) {
            pts.push_back(c.lo);
            pts.push_back(0.5 * (c.lo + c.hi));
            pts.push_back(c.hi);
          } else if constexpr (std::is_same_v<T, PointListCell>) {
            pts.insert(pts.end(), c.points.begin(), c.points.end());
          } else {
            pts.push_back(c.accumulation);
            const std::size_t first = c.first_index();
            if (terms_per_family > 0) {
              const std::size_t stop =
                  std::min(last_index(c), first + terms_per_family - 1);
              for (std::size_t k = first; k <= stop; ++k) {
                pts.push_back(c.point(k));
              }
            }
          }
        },
        cell);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

TruncationResult truncate_to_grid(const AnalyticScale& scale,
                                  std::size_t budget,
                                  std::size_t interval_resolution) {
  if (budget < 3) {
    throw std::invalid_argument("truncate_to_grid: budget must be >= 3");
  }
  if (interval_resolution < 2) {
    throw std::invalid_argument(
        "truncate_to_grid: interval_resolution must be >= 2");
  }
  std::vector<double> pts;
  std::vector<double> accumulations;
  std::vector<const SequenceCell*> families;
  for (const auto& cell : scale.cells()) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, IntervalCell>) {
            for (std::size_t i = 0; i < interval_resolution; ++i) {
              const double s = static_cast<double>(i) /
                               static_cast<double>(interval_resolution - 1);
              pts.push_back(c.lo + s * (c.hi - c.lo));
            }
            pts.back() = c.hi;
          } else if constexpr (std::is_same_v<T, PointListCell>) {
            pts.insert(pts.end(), c.points.begin(), c.points.end());
          } else {
            families.push_back(&c);
          }
        },
        cell);
  }
  // Families share `budget` grid points: every accumulation point and every
  // extreme term is mandatory; remaining slots go to the terms farthest
  // from their accumulation points, largest scaled distance first.
  if (!families.empty()) {
    const std::size_t mandatory = 2 * families.size();
    if (budget < mandatory) {
      throw std::invalid_argument(
          "truncate_to_grid: budget " + std::to_string(budget) +
          " cannot cover the " + std::to_string(mandatory) +
          " mandatory points (accumulation + extreme term per family)");
    }
    std::size_t slots = budget - mandatory;
    std::vector<std::size_t> next(families.size());
    for (std::size_t i = 0; i < families.size(); ++i) {
      const SequenceCell& f = *families[i];
      pts.push_back(f.accumulation);
      accumulations.push_back(f.accumulation);
      pts.push_back(f.extreme_point());
      next[i] = f.first_index() + 1;
    }
    while (slots > 0) {
      std::size_t best = families.size();
      double best_dist = -1.0;
      for (std::size_t i = 0; i < families.size(); ++i) {
        const SequenceCell& f = *families[i];
        if (f.max_index && next[i] > *f.max_index) {
          continue;
        }
        const double d = f.amplitude * f.distance(next[i]);
        if (d > best_dist) {
          best_dist = d;
          best = i;
        }
      }
      if (best == families.size()) {
        break;  // every family exhausted before the budget
      }
      pts.push_back(families[best]->point(next[best]));
      ++next[best];
      --slots;
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  GridScale grid = GridScale::from_points(pts);
  TruncationResult out{std::move(grid), {}};
  for (double p : accumulations) {
    const auto it = std::lower_bound(pts.begin(), pts.end(), p);
    out.accumulation_indices.emplace(static_cast<std::size_t>(it - pts.begin()),
                                     p);
  }
  return out;
}

}  // namespace tsvar
