#include "tsvar/euler_lagrange.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "tsvar/calculus.hpp"
#include "tsvar/compensated_sum.hpp"

namespace tsvar {
namespace {

void require_usable(const Lagrangian& lagrangian, const GridFunction& u,
                    const char* where) {
  if (!u.full()) {
    throw std::invalid_argument(std::string(where) +
                                ": trajectory must cover the whole grid");
  }
  if (u.dimension() != lagrangian.dimension()) {
    throw std::invalid_argument(
        std::string(where) + ": trajectory dimension " +
        std::to_string(u.dimension()) + " does not match Lagrangian dimension " +
        std::to_string(lagrangian.dimension()));
  }
}

double max_row_norm(const Eigen::MatrixXd& rows) {
  double out = 0.0;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out = std::max(out, rows.row(r).norm());
  }
  return out;
}

ELResidualReport make_report(ELForm form, const GridScale& scale,
                             std::size_t first, Eigen::MatrixXd rows) {
  const double norm = max_row_norm(rows);
  return ELResidualReport{form, GridFunction(scale, first, std::move(rows)),
                          norm, std::nullopt};
}

}  // namespace

std::string_view to_label(ELForm form) noexcept {
  switch (form) {
    case ELForm::integral_delta:
      return "integral_delta";
    case ELForm::diff_nabla_delta:
      return "diff_nabla_delta";
    case ELForm::diff_delta_delta_shifted:
      return "diff_delta_delta_shifted";
    case ELForm::diff_delta_nabla:
      return "diff_delta_nabla";
  }
  return "unknown";
}

double functional_value(const Lagrangian& lagrangian, const GridFunction& u) {
  require_usable(lagrangian, u, "functional_value");
  const GridScale& scale = u.scale();
  const GridFunction du = delta_derivative(u);
  CompensatedSum acc;
  for (std::size_t k = 0; k + 1 < scale.size(); ++k) {
    acc.add(scale.mu(k) *
            lagrangian.value(u.value(k), du.value(k), scale[k]));
  }
  return acc.value();
}

double gateaux_derivative(const Lagrangian& lagrangian, const GridFunction& u,
                          const GridFunction& w) {
  require_usable(lagrangian, u, "gateaux_derivative");
  require_usable(lagrangian, w, "gateaux_derivative");
  if (!u.scale().aligned_with(w.scale())) {
    throw std::invalid_argument(
        "gateaux_derivative: trajectory and variation live on different "
        "grids");
  }
  const GridScale& scale = u.scale();
  const std::size_t last = scale.size() - 1;
  if (!w.value(0).isZero(0.0) || !w.value(last).isZero(0.0)) {
    throw std::invalid_argument(
        "gateaux_derivative: variation must vanish at both endpoints");
  }
  const GridFunction du = delta_derivative(u);
  const GridFunction dw = delta_derivative(w);
  CompensatedSum acc;
  for (std::size_t k = 0; k < last; ++k) {
    const double t = scale[k];
    const Eigen::VectorXd x = u.value(k);
    const Eigen::VectorXd v = du.value(k);
    acc.add(scale.mu(k) * (lagrangian.grad_x(x, v, t).dot(w.value(k)) +
                           lagrangian.grad_v(x, v, t).dot(dw.value(k))));
  }
  return acc.value();
}

ELResidualReport residual_integral_delta(const Lagrangian& lagrangian,
                                         const GridFunction& u) {
  require_usable(lagrangian, u, "residual_integral_delta");
  const GridScale& scale = u.scale();
  const Eigen::Index dim = u.dimension();
  const std::size_t points = scale.size() - 1;  // indices 0 .. N-2
  const GridFunction du = delta_derivative(u);

  Eigen::MatrixXd unfitted(points, dim);
  CompensatedVectorSum running(dim);
  for (std::size_t k = 0; k < points; ++k) {
    const double t = scale[k];
    const Eigen::VectorXd x = u.value(k);
    const Eigen::VectorXd v = du.value(k);
    running.add(scale.mu(k) * lagrangian.grad_x(x, v, t));
    unfitted.row(static_cast<Eigen::Index>(k)) =
        (lagrangian.grad_v(x, v, t) - running.value()).transpose();
  }

  // Least-squares constant: minimising sum_k |r_k - c|^2 gives the mean.
  const Eigen::VectorXd constant =
      unfitted.colwise().mean().transpose();
  Eigen::MatrixXd rows = unfitted.rowwise() - constant.transpose();

  ELResidualReport report =
      make_report(ELForm::integral_delta, scale, 0, std::move(rows));
  report.fitted_constant = constant;
  return report;
}

ELResidualReport residual_diff_nabla_delta(const Lagrangian& lagrangian,
                                           const GridFunction& u) {
  require_usable(lagrangian, u, "residual_diff_nabla_delta");
  const GridScale& scale = u.scale();
  const std::size_t n = scale.size();
  if (n < 3) {
    throw std::invalid_argument(
        "residual_diff_nabla_delta: need at least 3 grid points");
  }
  const Eigen::Index dim = u.dimension();
  const GridFunction du = delta_derivative(u);

  // psi_k = dL/dv(u_k, u_delta_k, t_k) on [0, N-2]; the residual is its
  // nabla-derivative minus sigma_nabla * dL/dx on [1, N-2].
  Eigen::MatrixXd psi(n - 1, dim);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    psi.row(static_cast<Eigen::Index>(k)) =
        lagrangian.grad_v(u.value(k), du.value(k), scale[k]).transpose();
  }
  Eigen::MatrixXd rows(n - 2, dim);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd gx =
        lagrangian.grad_x(u.value(k), du.value(k), scale[k]);
    rows.row(r - 1) = (psi.row(r) - psi.row(r - 1)) / scale.nu(k) -
                      scale.sigma_nabla(k) * gx.transpose();
  }
  return make_report(ELForm::diff_nabla_delta, scale, 1, std::move(rows));
}

ELResidualReport residual_diff_delta_delta_shifted(const Lagrangian& lagrangian,
                                                   const GridFunction& u) {
  require_usable(lagrangian, u, "residual_diff_delta_delta_shifted");
  const GridScale& scale = u.scale();
  const std::size_t n = scale.size();
  if (n < 3) {
    throw std::invalid_argument(
        "residual_diff_delta_delta_shifted: need at least 3 grid points");
  }
  const Eigen::Index dim = u.dimension();
  const GridFunction du = delta_derivative(u);

  // phi_k = dL/dv(u_{k+1}, u_delta_k, t_k) on [0, N-2]; residual is its
  // delta-derivative minus dL/dx(u_{k+1}, u_delta_k, t_k) on [0, N-3].
  Eigen::MatrixXd phi(n - 1, dim);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    phi.row(static_cast<Eigen::Index>(k)) =
        lagrangian.grad_v(u.value(k + 1), du.value(k), scale[k]).transpose();
  }
  Eigen::MatrixXd rows(n - 2, dim);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd gx =
        lagrangian.grad_x(u.value(k + 1), du.value(k), scale[k]);
    rows.row(r) = (phi.row(r + 1) - phi.row(r)) / scale.mu(k) - gx.transpose();
  }
  return make_report(ELForm::diff_delta_delta_shifted, scale, 0,
                     std::move(rows));
}

ELResidualReport residual_diff_delta_nabla(const Lagrangian& lagrangian,
                                           const GridFunction& u) {
  require_usable(lagrangian, u, "residual_diff_delta_nabla");
  const GridScale& scale = u.scale();
  const std::size_t n = scale.size();
  if (n < 3) {
    throw std::invalid_argument(
        "residual_diff_delta_nabla: need at least 3 grid points");
  }
  const Eigen::Index dim = u.dimension();
  const GridFunction du_nabla = nabla_derivative(u);

  // chi_k = dL/dv(u_k, u_nabla_k, t_k) on [1, N-1]; residual is its
  // delta-derivative minus rho_delta = nu/mu times dL/dx on [1, N-2].
  Eigen::MatrixXd chi(n - 1, dim);
  for (std::size_t k = 1; k < n; ++k) {
    chi.row(static_cast<Eigen::Index>(k - 1)) =
        lagrangian.grad_v(u.value(k), du_nabla.value(k), scale[k]).transpose();
  }
  Eigen::MatrixXd rows(n - 2, dim);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k - 1);
    const Eigen::VectorXd gx =
        lagrangian.grad_x(u.value(k), du_nabla.value(k), scale[k]);
    const double rho_delta = scale.nu(k) / scale.mu(k);
    rows.row(r) =
        (chi.row(r + 1) - chi.row(r)) / scale.mu(k) - rho_delta * gx.transpose();
  }
  return make_report(ELForm::diff_delta_nabla, scale, 1, std::move(rows));
}

}  // namespace tsvar
