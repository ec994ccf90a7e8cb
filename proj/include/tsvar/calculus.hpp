#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

#include "tsvar/compensated_sum.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/grid_scale.hpp"

namespace tsvar {

// ---------------------------------------------------------------------------
// Difference quotients
// ---------------------------------------------------------------------------

/// Delta-derivative u^Delta(t_k) = (u(sigma(t_k)) - u(t_k)) / mu(t_k).
/// Defined where both u(t_k) and u(t_{k+1}) are covered, i.e. on the window
/// [first, end-1); this is automatically inside T^kappa.
inline GridFunction delta_derivative(const GridFunction& u) {
  const std::size_t first = u.first_index();
  const std::size_t end = u.end_index();
  if (end - first < 2) {
    throw std::invalid_argument(
        "delta_derivative: window too small (need at least 2 points)");
  }
  const GridScale& scale = u.scale();
  Eigen::MatrixXd d(end - first - 1, u.dimension());
  for (std::size_t k = first; k + 1 < end; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k - first);
    d.row(r) = (u.values().row(r + 1) - u.values().row(r)) / scale.mu(k);
  }
  return GridFunction(scale, first, std::move(d));
}

/// Nabla-derivative u^nabla(t_k) = (u(t_k) - u(rho(t_k))) / nu(t_k).
/// Defined on [first+1, end); automatically inside T_kappa.
inline GridFunction nabla_derivative(const GridFunction& u) {
  const std::size_t first = u.first_index();
  const std::size_t end = u.end_index();
  if (end - first < 2) {
    throw std::invalid_argument(
        "nabla_derivative: window too small (need at least 2 points)");
  }
  const GridScale& scale = u.scale();
  Eigen::MatrixXd d(end - first - 1, u.dimension());
  for (std::size_t k = first + 1; k < end; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k - first);
    d.row(r - 1) = (u.values().row(r) - u.values().row(r - 1)) / scale.nu(k);
  }
  return GridFunction(scale, first + 1, std::move(d));
}

// ---------------------------------------------------------------------------
// Jump compositions
// ---------------------------------------------------------------------------

/// u^sigma(t_k) = u(sigma(t_k)) = u(t_{min(k+1, N-1)}); needs full coverage.
inline GridFunction shift_forward(const GridFunction& u) {
  if (!u.full()) {
    throw std::invalid_argument("shift_forward: needs full coverage");
  }
  const std::size_t n = u.scale().size();
  Eigen::MatrixXd s(n, u.dimension());
  for (std::size_t k = 0; k < n; ++k) {
    s.row(static_cast<Eigen::Index>(k)) =
        u.values().row(static_cast<Eigen::Index>(std::min(k + 1, n - 1)));
  }
  return GridFunction(u.scale(), std::move(s));
}

/// u^rho(t_k) = u(rho(t_k)) = u(t_{max(k-1, 0)}); needs full coverage.
inline GridFunction shift_backward(const GridFunction& u) {
  if (!u.full()) {
    throw std::invalid_argument("shift_backward: needs full coverage");
  }
  const std::size_t n = u.scale().size();
  Eigen::MatrixXd s(n, u.dimension());
  for (std::size_t k = 0; k < n; ++k) {
    s.row(static_cast<Eigen::Index>(k)) =
        u.values().row(static_cast<Eigen::Index>(k == 0 ? 0 : k - 1));
  }
  return GridFunction(u.scale(), std::move(s));
}

// ---------------------------------------------------------------------------
// Cauchy integrals
// ---------------------------------------------------------------------------

/// Delta-integral over [t_from, t_to]:  sum_{k=from}^{to-1} mu(t_k) f(t_k).
/// Uses compensated summation.  Requires from <= to and coverage of
/// [from, to); from == to gives the zero vector.
inline Eigen::VectorXd delta_integral(const GridFunction& f, std::size_t from,
                                      std::size_t to) {
  if (from > to) {
    throw std::invalid_argument("delta_integral: need from <= to, got " +
                                std::to_string(from) + " > " +
                                std::to_string(to));
  }
  if (to > f.scale().size() - 1) {
    throw std::out_of_range("delta_integral: upper index " +
                            std::to_string(to) + " beyond scale maximum");
  }
  CompensatedVectorSum acc(f.dimension());
  for (std::size_t k = from; k < to; ++k) {
    acc.add(f.scale().mu(k) * f.value(k));
  }
  return acc.value();
}

/// Nabla-integral over [t_from, t_to]:  sum_{k=from+1}^{to} nu(t_k) f(t_k).
inline Eigen::VectorXd nabla_integral(const GridFunction& f, std::size_t from,
                                      std::size_t to) {
  if (from > to) {
    throw std::invalid_argument("nabla_integral: need from <= to, got " +
                                std::to_string(from) + " > " +
                                std::to_string(to));
  }
  if (to > f.scale().size() - 1) {
    throw std::out_of_range("nabla_integral: upper index " +
                            std::to_string(to) + " beyond scale maximum");
  }
  CompensatedVectorSum acc(f.dimension());
  for (std::size_t k = from + 1; k <= to; ++k) {
    acc.add(f.scale().nu(k) * f.value(k));
  }
  return acc.value();
}

/// Running delta-integral U(t_k) = integral over [t_first, t_k] of f.
/// U covers one index more than f (capped at the scale maximum), U(first)=0,
/// and delta_derivative(U) reproduces f up to roundoff.
inline GridFunction delta_antiderivative(const GridFunction& f) {
  const std::size_t first = f.first_index();
  const std::size_t out_end = std::min(f.end_index() + 1, f.scale().size());
  Eigen::MatrixXd vals(out_end - first, f.dimension());
  CompensatedVectorSum acc(f.dimension());
  vals.row(0).setZero();
  for (std::size_t k = first; k + 1 < out_end; ++k) {
    acc.add(f.scale().mu(k) * f.value(k));
    vals.row(static_cast<Eigen::Index>(k + 1 - first)) =
        acc.value().transpose();
  }
  return GridFunction(f.scale(), first, std::move(vals));
}

// ---------------------------------------------------------------------------
// Integration by parts
// ---------------------------------------------------------------------------

/// Defect of the integration-by-parts identity for scalar u, v with full
/// coverage:
///
///   integral_a^b u v^Delta  -  [ u(b)v(b) - u(a)v(a)
///                                - integral_a^b u^Delta v^sigma ]
///
/// Algebraically zero on every grid; the returned value is pure roundoff.
inline double integration_by_parts_defect(const GridFunction& u,
                                          const GridFunction& v) {
  if (u.dimension() != 1 || v.dimension() != 1) {
    throw std::invalid_argument(
        "integration_by_parts_defect: scalar functions required");
  }
  if (!u.full() || !v.full()) {
    throw std::invalid_argument(
        "integration_by_parts_defect: full coverage required");
  }
  if (!u.scale().aligned_with(v.scale())) {
    throw std::invalid_argument(
        "integration_by_parts_defect: u and v live on different scales");
  }
  const GridScale& scale = u.scale();
  const std::size_t n = scale.size();
  CompensatedSum lhs;
  CompensatedSum rhs_int;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double mu = scale.mu(k);
    const double u_k = u.scalar(k);
    const double v_k = v.scalar(k);
    const double v_next = v.scalar(k + 1);
    const double u_next = u.scalar(k + 1);
    lhs.add(mu * u_k * ((v_next - v_k) / mu));
    rhs_int.add(mu * ((u_next - u_k) / mu) * v_next);
  }
  const double boundary =
      u.scalar(n - 1) * v.scalar(n - 1) - u.scalar(0) * v.scalar(0);
  return lhs.value() - (boundary - rhs_int.value());
}

}  // namespace tsvar
