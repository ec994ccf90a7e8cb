#pragma once

#include <Eigen/Core>

#include <optional>
#include <string_view>

#include "tsvar/grid_function.hpp"
#include "tsvar/lagrangian.hpp"

namespace tsvar {

/// The four equivalent first-order conditions checked by this library.
///
/// With psi(t) = dL/dv(u(t), u_delta(t), t) the forms read:
///   integral_delta           psi(t) = int_a^sigma(t) dL/dx + c
///   diff_nabla_delta         psi_nabla(t) = sigma_nabla(t) dL/dx(t)
///   diff_delta_delta_shifted [dL/dv(u_sigma, u_delta, .)]_delta(t)
///                              = dL/dx(u_sigma(t), u_delta(t), t)
///   diff_delta_nabla         [dL/dv(u, u_nabla, .)]_delta(t)
///                              = rho_delta(t) dL/dx(u(t), u_nabla(t), t)
enum class ELForm {
  integral_delta,
  diff_nabla_delta,
  diff_delta_delta_shifted,
  diff_delta_nabla,
};

[[nodiscard]] std::string_view to_label(ELForm form) noexcept;

/// Pointwise residuals of one Euler-Lagrange form along a trajectory.
struct ELResidualReport {
  ELForm form = ELForm::integral_delta;
  /// Residual vectors, windowed to the natural domain of the form.
  GridFunction residuals;
  /// Largest Euclidean norm among the residual vectors (0 if the domain
  /// is empty).
  double max_norm = 0.0;
  /// Integration constant fitted by least squares; present only for the
  /// integral form.
  std::optional<Eigen::VectorXd> fitted_constant;
};

/// Action integral: the delta-integral of L(u, u_delta, t) over [a, b).
/// Requires u to cover the whole grid.
[[nodiscard]] double functional_value(const Lagrangian& lagrangian,
                                      const GridFunction& u);

/// First variation of the action at u in direction w, for a variation that
/// vanishes at both ends.  Throws std::invalid_argument unless
/// w(a) = w(b) = 0 exactly.
[[nodiscard]] double gateaux_derivative(const Lagrangian& lagrangian,
                                        const GridFunction& u,
                                        const GridFunction& w);

/// Integral form on grid indices [0, N-2]: residual
///   dL/dv(k) - sum_{j<=k} mu_j dL/dx(j) - c
/// with c chosen by least squares (the mean of the unfitted residuals).
[[nodiscard]] ELResidualReport residual_integral_delta(
    const Lagrangian& lagrangian, const GridFunction& u);

/// Differential form on [1, N-2]: nabla-derivative of dL/dv(u, u_delta, .)
/// minus sigma_nabla times dL/dx(u, u_delta, .).
[[nodiscard]] ELResidualReport residual_diff_nabla_delta(
    const Lagrangian& lagrangian, const GridFunction& u);

/// Shifted differential form on [0, N-3]: delta-derivative of
/// dL/dv(u_sigma, u_delta, .) minus dL/dx(u_sigma, u_delta, .).
[[nodiscard]] ELResidualReport residual_diff_delta_delta_shifted(
    const Lagrangian& lagrangian, const GridFunction& u);

/// Mixed differential form on [1, N-2]: delta-derivative of
/// dL/dv(u, u_nabla, .) minus rho_delta = nu/mu times dL/dx(u, u_nabla, .).
[[nodiscard]] ELResidualReport residual_diff_delta_nabla(
    const Lagrangian& lagrangian, const GridFunction& u);

}  // namespace tsvar
