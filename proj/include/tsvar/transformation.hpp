#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

namespace tsvar {

/**
 * One-parameter family of state-space maps theta -> Phi(theta, .) on R^n with
 * Phi(0, .) the identity.
 *
 * Instances come from the factory catalog (translation, planar rotation,
 * linear flow).  Each family carries the map, its theta-derivative, and a
 * positive half-width eta describing the parameter interval [-eta, eta] over
 * which the family is meant to be probed; evaluation itself is not restricted
 * to that interval.  Construction verifies Phi(0, x) = x on random probes,
 * which holds exactly for every catalog kind.
 */
class TransformationFamily {
 public:
  /// Rigid translation Phi(theta, x) = x + theta * direction.
  static TransformationFamily translation(Eigen::VectorXd direction,
                                          double eta = 1.0);

  /// Rotation by angle theta in the (axis_i, axis_j) coordinate plane.
  static TransformationFamily rotation(Eigen::Index dimension,
                                       Eigen::Index axis_i,
                                       Eigen::Index axis_j, double eta = 1.0);

  /// Linear flow Phi(theta, x) = expm(theta * generator) x.
  static TransformationFamily linear_flow(Eigen::MatrixXd generator,
                                          double eta = 1.0);

  [[nodiscard]] const std::string& kind() const noexcept { return kind_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return dimension_; }
  /// Half-width of the parameter interval the family is probed over.
  [[nodiscard]] double eta() const noexcept { return eta_; }

  /// Evaluates Phi(theta, x).
  [[nodiscard]] Eigen::VectorXd apply(double theta,
                                      const Eigen::VectorXd& x) const;

  /// Evaluates the partial derivative of Phi with respect to theta.
  [[nodiscard]] Eigen::VectorXd theta_derivative(double theta,
                                                 const Eigen::VectorXd& x) const;

 private:
  using Map = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

  TransformationFamily(std::string kind, Eigen::Index dimension, double eta,
                       Map map, Map derivative);

  void require_identity_at_zero() const;
  void check_argument(const Eigen::VectorXd& x) const;

  std::string kind_;
  Eigen::Index dimension_;
  double eta_;
  Map map_;
  Map derivative_;
};

/**
 * Dense matrix exponential by scaling and squaring of the truncated power
 * series.  Accurate to about 1e-14 for the moderately sized, moderately
 * normed generators used by the transformation catalog; exact for the zero
 * matrix.
 */
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

}  // namespace tsvar
