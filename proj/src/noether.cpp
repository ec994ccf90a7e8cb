#include "tsvar/noether.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tsvar/calculus.hpp"

namespace tsvar {
namespace {

void require_trajectory(const Lagrangian& lagrangian,
                        const TransformationFamily& phi,
                        const GridFunction& trajectory, const char* who) {
  if (!trajectory.full()) {
    throw std::invalid_argument(std::string(who) +
                                ": trajectory must cover the full scale");
  }
  if (trajectory.dimension() != lagrangian.dimension()) {
    throw std::invalid_argument(
        std::string(who) + ": trajectory dimension " +
        std::to_string(trajectory.dimension()) +
        " does not match Lagrangian dimension " +
        std::to_string(lagrangian.dimension()));
  }
  if (trajectory.dimension() != phi.dimension()) {
    throw std::invalid_argument(
        std::string(who) + ": trajectory dimension " +
        std::to_string(trajectory.dimension()) +
        " does not match transformation dimension " +
        std::to_string(phi.dimension()));
  }
}

/// Applies Phi(theta, .) pointwise to a full trajectory.
GridFunction transform_trajectory(const TransformationFamily& phi,
                                  const GridFunction& trajectory,
                                  double theta) {
  Eigen::MatrixXd rows(trajectory.values().rows(), trajectory.values().cols());
  for (std::size_t k = 0; k < trajectory.count(); ++k) {
    rows.row(static_cast<Eigen::Index>(k)) =
        phi.apply(theta, trajectory.value(k)).transpose();
  }
  return GridFunction(trajectory.scale(), std::move(rows));
}

}  // namespace

InvarianceReport check_invariance(const Lagrangian& lagrangian,
                                  const TransformationFamily& phi,
                                  const GridFunction& trajectory,
                                  int theta_samples, double tolerance) {
  require_trajectory(lagrangian, phi, trajectory, "check_invariance");
  if (theta_samples < 5) {
    throw std::invalid_argument(
        "check_invariance: need at least 5 theta samples, got " +
        std::to_string(theta_samples));
  }
  if (!std::isfinite(tolerance) || tolerance <= 0.0) {
    throw std::invalid_argument(
        "check_invariance: tolerance must be positive and finite");
  }

  const GridScale& scale = trajectory.scale();
  const GridFunction velocity = delta_derivative(trajectory);

  // Reference integrand at theta = 0 (Phi(0, .) is the identity).
  Eigen::VectorXd base(static_cast<Eigen::Index>(velocity.count()));
  for (std::size_t k = velocity.first_index(); k < velocity.end_index(); ++k) {
    base(static_cast<Eigen::Index>(k - velocity.first_index())) =
        lagrangian.value(trajectory.value(k), velocity.value(k), scale[k]);
  }
  const double magnitude = base.cwiseAbs().maxCoeff();

  std::vector<double> thetas(static_cast<std::size_t>(theta_samples));
  for (int i = 0; i < theta_samples; ++i) {
    thetas[static_cast<std::size_t>(i)] =
        -phi.eta() +
        2.0 * phi.eta() * static_cast<double>(i) /
            static_cast<double>(theta_samples - 1);
  }

  double variation = 0.0;
  for (double theta : thetas) {
    const GridFunction moved = transform_trajectory(phi, trajectory, theta);
    const GridFunction moved_velocity = delta_derivative(moved);
    for (std::size_t k = velocity.first_index(); k < velocity.end_index();
         ++k) {
      const double value = lagrangian.value(moved.value(k),
                                            moved_velocity.value(k), scale[k]);
      variation = std::max(
          variation,
          std::abs(value -
                   base(static_cast<Eigen::Index>(k - velocity.first_index()))));
    }
  }

  const bool invariant = variation <= tolerance * (1.0 + magnitude);
  return InvarianceReport{invariant, variation, std::move(thetas)};
}

GridFunction noether_constant(const Lagrangian& lagrangian,
                              const TransformationFamily& phi,
                              const GridFunction& trajectory) {
  require_trajectory(lagrangian, phi, trajectory, "noether_constant");
  const GridScale& scale = trajectory.scale();
  const GridFunction velocity = delta_derivative(trajectory);

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(velocity.count()), 1);
  for (std::size_t k = 0; k < velocity.count(); ++k) {
    const Eigen::VectorXd generator =
        phi.theta_derivative(0.0, trajectory.value(k + 1));
    rows(static_cast<Eigen::Index>(k), 0) =
        lagrangian.grad_v(trajectory.value(k), velocity.value(k), scale[k])
            .dot(generator);
  }
  return GridFunction(scale, 0, std::move(rows));
}

GridFunction noether_constant_nabla(const Lagrangian& lagrangian,
                                    const TransformationFamily& phi,
                                    const GridFunction& trajectory) {
  require_trajectory(lagrangian, phi, trajectory, "noether_constant_nabla");
  const GridScale& scale = trajectory.scale();
  const GridFunction velocity = nabla_derivative(trajectory);

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(velocity.count()), 1);
  for (std::size_t k = velocity.first_index(); k < velocity.end_index(); ++k) {
    const Eigen::VectorXd generator =
        phi.theta_derivative(0.0, trajectory.value(k - 1));
    rows(static_cast<Eigen::Index>(k - velocity.first_index()), 0) =
        lagrangian.grad_v(trajectory.value(k), velocity.value(k), scale[k])
            .dot(generator);
  }
  return GridFunction(scale, velocity.first_index(), std::move(rows));
}

DriftReport drift(const GridFunction& values) {
  if (values.dimension() != 1) {
    throw std::invalid_argument("drift: scalar grid function required, got "
                                "dimension " +
                                std::to_string(values.dimension()));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(values.count());
  const Eigen::VectorXd column = values.values().col(0);
  const double mean = column.mean();
  const double max_deviation = (column.array() - mean).abs().maxCoeff();

  Eigen::VectorXd times(m);
  for (std::size_t k = values.first_index(); k < values.end_index(); ++k) {
    times(static_cast<Eigen::Index>(k - values.first_index())) =
        values.scale()[k];
  }
  const double time_mean = times.mean();
  const Eigen::ArrayXd centered = times.array() - time_mean;
  const double denominator = (centered * centered).sum();
  double slope = 0.0;
  if (denominator > 0.0) {
    slope = (centered * (column.array() - mean)).sum() / denominator;
  }
  return DriftReport{max_deviation, slope};
}

}  // namespace tsvar
