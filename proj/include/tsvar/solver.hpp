#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tsvar/euler_lagrange.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/grid_scale.hpp"
#include "tsvar/lagrangian.hpp"

namespace tsvar {

/// Which Euler-Lagrange system the boundary-value solver drives to zero.
enum class ELMode {
  nonshifted_nabla_delta,
  shifted_delta_delta,
  nonshifted_delta_nabla,
};

[[nodiscard]] std::string_view to_label(ELMode mode) noexcept;

/// Residual operation matching a solver mode.
[[nodiscard]] ELForm el_form_for(ELMode mode) noexcept;

/// Two-point boundary value problem for a critical trajectory.
struct BVProblem {
  Lagrangian lagrangian;
  GridScale scale;
  Eigen::VectorXd ua;
  Eigen::VectorXd ub;
  ELMode mode = ELMode::nonshifted_nabla_delta;
};

struct SolveOptions {
  /// Convergence when the max residual norm drops below
  /// newton_tol * (1 + max |u|).
  double newton_tol = 1e-12;
  int max_iterations = 50;
  /// Full-coverage starting trajectory; boundary rows are overwritten with
  /// ua / ub.  Default: linear interpolation between the boundary values.
  std::optional<GridFunction> initial_guess;
};

struct SolveReport {
  GridFunction trajectory;
  int iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
  /// 1-norm condition estimate of the last factorized Jacobian
  /// (0 when Newton converged without assembling one).
  double jacobian_condition_estimate = 0.0;
};

/// The assembled Jacobian was singular (or numerically indistinguishable
/// from singular).
class SingularJacobianError : public std::runtime_error {
 public:
  SingularJacobianError(const std::string& message, double estimate)
      : std::runtime_error(message), condition_estimate(estimate) {}
  double condition_estimate;
};

/// Newton failed to converge inside step_forward; carries the last iterate.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& message, Eigen::VectorXd iterate)
      : std::runtime_error(message), last_iterate(std::move(iterate)) {}
  Eigen::VectorXd last_iterate;
};

/// A step failed mid-integration; carries everything computed so far.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& message, GridFunction partial,
                     std::size_t at_index)
      : std::runtime_error(message),
        partial_trajectory(std::move(partial)),
        failed_index(at_index) {}
  GridFunction partial_trajectory;
  std::size_t failed_index;
};

/// Damped (Armijo) Newton on the stacked interior residuals of the selected
/// Euler-Lagrange form, with u(a) and u(b) held fixed.  Non-convergence is
/// reported, not thrown; a singular Jacobian throws SingularJacobianError.
[[nodiscard]] SolveReport solve_bvp(const BVProblem& problem,
                                    const SolveOptions& options = {});

/// Jacobian of the stacked interior residuals of the selected form with
/// respect to the interior values u_1 .. u_{N-2}, assembled analytically
/// from the catalog's second derivatives (block tridiagonal).
[[nodiscard]] Eigen::SparseMatrix<double> interior_jacobian(
    ELMode mode, const Lagrangian& lagrangian, const GridFunction& u);

/// Advances the three-term recurrence once: given u(t_{k-1}) and u(t_k),
/// returns the u(t_{k+1}) that zeroes the nabla-of-delta residual at t_k.
[[nodiscard]] Eigen::VectorXd step_forward(const Lagrangian& lagrangian,
                                           const GridScale& scale,
                                           const Eigen::VectorXd& u_prev,
                                           const Eigen::VectorXd& u_curr,
                                           std::size_t k,
                                           const SolveOptions& options = {});

/// Variational integrator: iterates step_forward across the whole grid from
/// the two seed values u(t_0), u(t_1).
[[nodiscard]] SolveReport integrate(const Lagrangian& lagrangian,
                                    const GridScale& scale,
                                    const Eigen::VectorXd& u0,
                                    const Eigen::VectorXd& u1,
                                    const SolveOptions& options = {});

}  // namespace tsvar
