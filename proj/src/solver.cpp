#include "tsvar/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "tsvar/calculus.hpp"

namespace tsvar {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinDamping = 9.5367431640625e-07;  // 2^-20
constexpr double kSingularCondition = 1e14;
constexpr double kInf = std::numeric_limits<double>::infinity();

ELResidualReport mode_residual(ELMode mode, const Lagrangian& lagrangian,
                               const GridFunction& u) {
  switch (mode) {
    case ELMode::nonshifted_nabla_delta:
      return residual_diff_nabla_delta(lagrangian, u);
    case ELMode::shifted_delta_delta:
      return residual_diff_delta_delta_shifted(lagrangian, u);
    case ELMode::nonshifted_delta_nabla:
      return residual_diff_delta_nabla(lagrangian, u);
  }
  throw std::logic_error("unknown solver mode");
}

void append_block(std::vector<Triplet>& out, Eigen::Index block_row,
                  Eigen::Index block_col, Eigen::Index n, const Mat& m) {
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m(i, j) != 0.0) {
        out.emplace_back(block_row * n + i, block_col * n + j, m(i, j));
      }
    }
  }
}

/// Jacobian of the stacked interior residuals with respect to the interior
/// trajectory values u_1 .. u_{N-2}.  All three modes produce a block
/// tridiagonal matrix; the entries below follow from differentiating the
/// gradient compositions (d(dL/dv)/dx = hess_xv^T, d(dL/dv)/dv = hess_vv,
/// d(dL/dx)/dx = hess_xx, d(dL/dx)/dv = hess_xv) through the difference
/// quotients.
SpMat assemble_jacobian(ELMode mode, const Lagrangian& lagrangian,
                        const GridFunction& u) {
  const GridScale& s = u.scale();
  const std::size_t N = s.size();
  const Eigen::Index n = u.dimension();
  const auto m = static_cast<Eigen::Index>(N - 2);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(3 * m * n * n));

  if (mode == ELMode::nonshifted_nabla_delta) {
    const GridFunction du = delta_derivative(u);
    for (std::size_t k = 1; k + 1 < N; ++k) {
      const auto r = static_cast<Eigen::Index>(k - 1);
      const double nu = s.nu(k);
      const double mu_k = s.mu(k);
      const double mu_km = s.mu(k - 1);
      const double sg = s.sigma_nabla(k);
      const Vec& xk = u.value(k);
      const Vec& vk = du.value(k);
      const double tk = s[k];
      const Mat hvv_k = lagrangian.hess_vv(xk, vk, tk);
      const Mat hxv_k = lagrangian.hess_xv(xk, vk, tk);
      const Mat hxx_k = lagrangian.hess_xx(xk, vk, tk);
      const Vec& xm = u.value(k - 1);
      const Vec& vm = du.value(k - 1);
      const double tm = s[k - 1];
      const Mat hvv_m = lagrangian.hess_vv(xm, vm, tm);
      const Mat hxv_m = lagrangian.hess_xv(xm, vm, tm);

      if (k > 1) {
        const Mat sub = -(hxv_m.transpose() - hvv_m / mu_km) / nu;
        append_block(trip, r, r - 1, n, sub);
      }
      const Mat diag =
          (hxv_k.transpose() - hvv_k / mu_k - hvv_m / mu_km) / nu -
          sg * (hxx_k - hxv_k / mu_k);
      append_block(trip, r, r, n, diag);
      if (k + 2 < N) {
        const Mat sup = hvv_k / (nu * mu_k) - sg * hxv_k / mu_k;
        append_block(trip, r, r + 1, n, sup);
      }
    }
  } else if (mode == ELMode::shifted_delta_delta) {
    const GridFunction du = delta_derivative(u);
    for (std::size_t k = 0; k + 2 < N; ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      const double mu_k = s.mu(k);
      const double mu_k1 = s.mu(k + 1);
      const Vec& xk = u.value(k + 1);
      const Vec& vk = du.value(k);
      const double tk = s[k];
      const Mat hvv_k = lagrangian.hess_vv(xk, vk, tk);
      const Mat hxv_k = lagrangian.hess_xv(xk, vk, tk);
      const Mat hxx_k = lagrangian.hess_xx(xk, vk, tk);
      const Vec& x1 = u.value(k + 2);
      const Vec& v1 = du.value(k + 1);
      const double t1 = s[k + 1];
      const Mat hvv_1 = lagrangian.hess_vv(x1, v1, t1);
      const Mat hxv_1 = lagrangian.hess_xv(x1, v1, t1);

      if (k > 0) {
        const Mat sub = hvv_k / (mu_k * mu_k) + hxv_k / mu_k;
        append_block(trip, r, r - 1, n, sub);
      }
      const Mat diag =
          (-hvv_1 / mu_k1 - hxv_k.transpose() - hvv_k / mu_k) / mu_k -
          hxx_k - hxv_k / mu_k;
      append_block(trip, r, r, n, diag);
      if (k + 3 < N) {
        const Mat sup = (hxv_1.transpose() + hvv_1 / mu_k1) / mu_k;
        append_block(trip, r, r + 1, n, sup);
      }
    }
  } else {
    const GridFunction dn = nabla_derivative(u);
    for (std::size_t k = 1; k + 1 < N; ++k) {
      const auto r = static_cast<Eigen::Index>(k - 1);
      const double mu_k = s.mu(k);
      const double nu_k = s.nu(k);
      const double nu_k1 = s.nu(k + 1);
      const Vec& xk = u.value(k);
      const Vec& vk = dn.value(k);
      const double tk = s[k];
      const Mat hvv_k = lagrangian.hess_vv(xk, vk, tk);
      const Mat hxv_k = lagrangian.hess_xv(xk, vk, tk);
      const Mat hxx_k = lagrangian.hess_xx(xk, vk, tk);
      const Vec& x1 = u.value(k + 1);
      const Vec& v1 = dn.value(k + 1);
      const double t1 = s[k + 1];
      const Mat hvv_1 = lagrangian.hess_vv(x1, v1, t1);
      const Mat hxv_1 = lagrangian.hess_xv(x1, v1, t1);

      if (k > 1) {
        const Mat sub = hvv_k / (mu_k * nu_k) + hxv_k / mu_k;
        append_block(trip, r, r - 1, n, sub);
      }
      const Mat diag =
          (-hvv_1 / nu_k1 - hxv_k.transpose() - hvv_k / nu_k) / mu_k -
          (nu_k / mu_k) * (hxx_k + hxv_k / nu_k);
      append_block(trip, r, r, n, diag);
      if (k + 2 < N) {
        const Mat sup = (hxv_1.transpose() + hvv_1 / nu_k1) / mu_k;
        append_block(trip, r, r + 1, n, sup);
      }
    }
  }

  SpMat jac(m * n, m * n);
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

double matrix_one_norm(const SpMat& m) {
  double out = 0.0;
  for (int col = 0; col < m.outerSize(); ++col) {
    double sum = 0.0;
    for (SpMat::InnerIterator it(m, col); it; ++it) sum += std::abs(it.value());
    out = std::max(out, sum);
  }
  return out;
}

/// Hager-style 1-norm condition estimate using the already-computed
/// factorization of J and a fresh factorization of J^T.
double condition_estimate(const SpMat& jac, Eigen::SparseLU<SpMat>& lu) {
  const Eigen::Index m = jac.rows();
  SpMat jt = SpMat(jac.transpose());
  Eigen::SparseLU<SpMat> lut;
  lut.compute(jt);
  if (lut.info() != Eigen::Success) return kInf;

  Vec x = Vec::Constant(m, 1.0 / static_cast<double>(m));
  Vec y = lu.solve(x);
  for (int pass = 0; pass < 4; ++pass) {
    Vec xi(m);
    for (Eigen::Index i = 0; i < m; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    const Vec z = lut.solve(xi);
    Eigen::Index best = 0;
    z.cwiseAbs().maxCoeff(&best);
    if (std::abs(z[best]) <= z.dot(x)) break;
    x = Vec::Zero(m);
    x[best] = 1.0;
    y = lu.solve(x);
  }
  return matrix_one_norm(jac) * y.lpNorm<1>();
}

Vec stack_rows(const Eigen::MatrixXd& rows) {
  Vec out(rows.rows() * rows.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out.segment(r * rows.cols(), rows.cols()) = rows.row(r).transpose();
  }
  return out;
}

GridFunction apply_interior_step(const GridFunction& u, const Vec& step,
                                 double damping) {
  GridFunction trial = u;
  const Eigen::Index n = u.dimension();
  const auto rows = static_cast<Eigen::Index>(u.scale().size());
  for (Eigen::Index k = 1; k + 1 < rows; ++k) {
    trial.mutable_values().row(k) +=
        damping * step.segment((k - 1) * n, n).transpose();
  }
  return trial;
}

void validate_options(const SolveOptions& options) {
  if (!(options.newton_tol > 0.0)) {
    throw std::invalid_argument("newton_tol must be positive");
  }
  if (options.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be at least 1");
  }
}

GridFunction initial_trajectory(const BVProblem& problem,
                                const SolveOptions& options) {
  const GridScale& s = problem.scale;
  const Eigen::Index n = problem.lagrangian.dimension();
  Mat vals(s.size(), n);
  if (options.initial_guess) {
    const GridFunction& g = *options.initial_guess;
    if (!g.full() || !g.scale().aligned_with(s) || g.dimension() != n) {
      throw std::invalid_argument(
          "solve_bvp: initial guess must cover the problem grid with "
          "matching dimension");
    }
    vals = g.values();
  } else {
    const double span = s.b() - s.a();
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double w = (s[k] - s.a()) / span;
      vals.row(static_cast<Eigen::Index>(k)) =
          ((1.0 - w) * problem.ua + w * problem.ub).transpose();
    }
  }
  vals.row(0) = problem.ua.transpose();
  vals.row(vals.rows() - 1) = problem.ub.transpose();
  return GridFunction(s, std::move(vals));
}

/// Newton with Armijo backtracking for one forward step; shared by
/// step_forward and integrate so the latter can report iteration counts
/// and conditioning.
struct StepOutcome {
  Vec next;
  int iterations = 0;
  double condition = 0.0;
};

StepOutcome step_forward_impl(const Lagrangian& lagrangian,
                              const GridScale& scale, const Vec& u_prev,
                              const Vec& u_curr, std::size_t k,
                              const SolveOptions& options) {
  validate_options(options);
  const Eigen::Index n = lagrangian.dimension();
  if (u_prev.size() != n || u_curr.size() != n) {
    throw std::invalid_argument(
        "step_forward: state dimension does not match the Lagrangian");
  }
  if (k < 1 || k + 1 >= scale.size()) {
    throw std::out_of_range(
        "step_forward: index " + std::to_string(k) +
        " is not an interior point (need 1 <= k <= N-2)");
  }
  const double mu = scale.mu(k);
  const double nu = scale.nu(k);
  const double sg = scale.sigma_nabla(k);
  const double tk = scale[k];
  const double tm = scale[k - 1];
  const Vec v_prev = (u_curr - u_prev) / nu;
  const Vec psi_prev = lagrangian.grad_v(u_prev, v_prev, tm);

  const auto residual = [&](const Vec& u_next) -> Vec {
    const Vec v = (u_next - u_curr) / mu;
    return (lagrangian.grad_v(u_curr, v, tk) - psi_prev) / nu -
           sg * lagrangian.grad_x(u_curr, v, tk);
  };

  Vec u_next = u_curr + sg * (u_curr - u_prev);
  Vec r = residual(u_next);
  StepOutcome out;
  const double base = std::max(u_curr.cwiseAbs().maxCoeff(),
                               u_prev.cwiseAbs().maxCoeff());
  while (true) {
    const double tol =
        options.newton_tol *
        (1.0 + std::max(base, u_next.cwiseAbs().maxCoeff()));
    if (r.norm() <= tol) {
      out.next = u_next;
      return out;
    }
    if (out.iterations >= options.max_iterations) {
      throw StepFailure("step_forward: no convergence after " +
                            std::to_string(out.iterations) +
                            " Newton iterations at index " + std::to_string(k),
                        u_next);
    }
    const Vec v = (u_next - u_curr) / mu;
    const Mat jac = lagrangian.hess_vv(u_curr, v, tk) / (nu * mu) -
                    sg * lagrangian.hess_xv(u_curr, v, tk) / mu;
    Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) {
      throw SingularJacobianError(
          "step_forward: singular Newton matrix at index " + std::to_string(k),
          kInf);
    }
    out.condition = std::max(
        out.condition, jac.cwiseAbs().colwise().sum().maxCoeff() *
                           lu.inverse().cwiseAbs().colwise().sum().maxCoeff());
    const Vec direction = lu.solve(-r);
    double damping = 1.0;
    bool accepted = false;
    const double rnorm = r.norm();
    while (damping >= kMinDamping) {
      const Vec trial = u_next + damping * direction;
      const Vec r_trial = residual(trial);
      if (r_trial.norm() <= (1.0 - kArmijoSlope * damping) * rnorm) {
        u_next = trial;
        r = r_trial;
        accepted = true;
        break;
      }
      damping *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      throw StepFailure(
          "step_forward: line search stalled at index " + std::to_string(k),
          u_next);
    }
  }
}

}  // namespace

Eigen::SparseMatrix<double> interior_jacobian(ELMode mode,
                                              const Lagrangian& lagrangian,
                                              const GridFunction& u) {
  if (!u.full()) {
    throw std::invalid_argument(
        "interior_jacobian: trajectory must cover the whole grid");
  }
  if (u.dimension() != lagrangian.dimension()) {
    throw std::invalid_argument(
        "interior_jacobian: trajectory dimension does not match Lagrangian");
  }
  return assemble_jacobian(mode, lagrangian, u);
}

std::string_view to_label(ELMode mode) noexcept {
  switch (mode) {
    case ELMode::nonshifted_nabla_delta:
      return "nonshifted_nabla_delta";
    case ELMode::shifted_delta_delta:
      return "shifted_delta_delta";
    case ELMode::nonshifted_delta_nabla:
      return "nonshifted_delta_nabla";
  }
  return "unknown";
}

ELForm el_form_for(ELMode mode) noexcept {
  switch (mode) {
    case ELMode::nonshifted_nabla_delta:
      return ELForm::diff_nabla_delta;
    case ELMode::shifted_delta_delta:
      return ELForm::diff_delta_delta_shifted;
    case ELMode::nonshifted_delta_nabla:
      return ELForm::diff_delta_nabla;
  }
  return ELForm::diff_nabla_delta;
}

SolveReport solve_bvp(const BVProblem& problem, const SolveOptions& options) {
  validate_options(options);
  const Eigen::Index n = problem.lagrangian.dimension();
  if (problem.ua.size() != n || problem.ub.size() != n) {
    throw std::invalid_argument(
        "solve_bvp: boundary values must match the Lagrangian dimension");
  }

  GridFunction u = initial_trajectory(problem, options);
  double res =
      mode_residual(problem.mode, problem.lagrangian, u).max_norm;
  int iterations = 0;
  double condition = 0.0;
  bool converged = false;
  bool stalled = false;

  while (true) {
    const double tol =
        options.newton_tol * (1.0 + u.values().cwiseAbs().maxCoeff());
    if (res <= tol) {
      converged = true;
      break;
    }
    if (iterations >= options.max_iterations || stalled) break;

    const SpMat jac = assemble_jacobian(problem.mode, problem.lagrangian, u);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      throw SingularJacobianError(
          "solve_bvp: Jacobian factorization failed (" +
              std::string(to_label(problem.mode)) + " mode)",
          kInf);
    }
    condition = condition_estimate(jac, lu);
    if (!std::isfinite(condition) || condition > kSingularCondition) {
      throw SingularJacobianError(
          "solve_bvp: Jacobian numerically singular (condition estimate " +
              std::to_string(condition) + ")",
          condition);
    }

    const Vec f = stack_rows(
        mode_residual(problem.mode, problem.lagrangian, u).residuals.values());
    const Vec direction = lu.solve(-f);
    double damping = 1.0;
    bool accepted = false;
    while (damping >= kMinDamping) {
      const GridFunction trial = apply_interior_step(u, direction, damping);
      const double res_trial =
          mode_residual(problem.mode, problem.lagrangian, trial).max_norm;
      if (res_trial <= (1.0 - kArmijoSlope * damping) * res) {
        u = trial;
        res = res_trial;
        accepted = true;
        break;
      }
      damping *= 0.5;
    }
    ++iterations;
    if (!accepted) stalled = true;
  }

  return SolveReport{std::move(u), iterations, res, converged, condition};
}

Eigen::VectorXd step_forward(const Lagrangian& lagrangian,
                             const GridScale& scale, const Vec& u_prev,
                             const Vec& u_curr, std::size_t k,
                             const SolveOptions& options) {
  return step_forward_impl(lagrangian, scale, u_prev, u_curr, k, options).next;
}

SolveReport integrate(const Lagrangian& lagrangian, const GridScale& scale,
                      const Vec& u0, const Vec& u1,
                      const SolveOptions& options) {
  validate_options(options);
  const Eigen::Index n = lagrangian.dimension();
  if (u0.size() != n || u1.size() != n) {
    throw std::invalid_argument(
        "integrate: seed values must match the Lagrangian dimension");
  }
  const std::size_t N = scale.size();
  Mat vals(N, n);
  vals.row(0) = u0.transpose();
  vals.row(1) = u1.transpose();
  int iterations = 0;
  double condition = 0.0;
  for (std::size_t k = 1; k + 1 < N; ++k) {
    const Vec prev = vals.row(static_cast<Eigen::Index>(k - 1)).transpose();
    const Vec curr = vals.row(static_cast<Eigen::Index>(k)).transpose();
    try {
      StepOutcome step =
          step_forward_impl(lagrangian, scale, prev, curr, k, options);
      vals.row(static_cast<Eigen::Index>(k + 1)) = step.next.transpose();
      iterations += step.iterations;
      condition = std::max(condition, step.condition);
    } catch (const StepFailure& failure) {
      GridFunction partial(
          scale, 0, vals.topRows(static_cast<Eigen::Index>(k + 1)).eval());
      throw IntegrationFailure(
          std::string("integrate: ") + failure.what(), std::move(partial), k);
    }
  }
  GridFunction trajectory(scale, std::move(vals));
  const double res =
      residual_diff_nabla_delta(lagrangian, trajectory).max_norm;
  const double tol =
      options.newton_tol *
      (1.0 + trajectory.values().cwiseAbs().maxCoeff());
  const bool converged = res <= tol;
  return SolveReport{std::move(trajectory), iterations, res, converged,
                     condition};
}

}  // namespace tsvar
