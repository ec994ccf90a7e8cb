#pragma once

#include <Eigen/Core>

#include <vector>

#include "tsvar/grid_function.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/transformation.hpp"

namespace tsvar {

/// Outcome of probing a Lagrangian / transformation pair for invariance
/// along a trajectory.
struct InvarianceReport {
  /// True when the largest integrand deviation stays below the scaled
  /// tolerance handed to check_invariance.
  bool invariant;
  /// max over sampled theta and over the delta-differentiable window of
  /// |L(Phi(theta,u), Phi(theta,u)^delta, t) - L(u, u^delta, t)|.
  double max_theta_variation;
  /// The theta values that were actually probed.
  std::vector<double> probed_thetas;
};

/// Flatness statistics for a scalar grid function.
struct DriftReport {
  double max_abs_deviation_from_mean;
  /// Least-squares slope of the values against grid time.
  double linear_slope;
};

/**
 * Probes whether the composed integrand t -> L(Phi(theta, u(t)),
 * Phi(theta, u)^delta(t), t) is independent of theta along the given
 * trajectory.  The transformed velocity is the grid delta-derivative of the
 * transformed trajectory.  `theta_samples` (at least 5) values of theta are
 * spread uniformly over [-eta, eta]; the family counts as invariant when the
 * worst deviation from the theta = 0 integrand stays within
 * tolerance * (1 + max |L|).
 *
 * Throws std::invalid_argument on dimension mismatch, a windowed trajectory,
 * fewer than 5 samples, or a non-positive tolerance.
 */
InvarianceReport check_invariance(const Lagrangian& lagrangian,
                                  const TransformationFamily& phi,
                                  const GridFunction& trajectory,
                                  int theta_samples = 7,
                                  double tolerance = 1e-10);

/**
 * Conserved quantity of a symmetric Lagrangian along a trajectory, in the
 * forward-difference setting:
 *
 *   I(t_k) = dLdv(u(t_k), u^delta(t_k), t_k) . dPhidtheta(0, u(sigma(t_k)))
 *
 * evaluated on the delta-differentiable window [0, N-1).  Along a critical
 * trajectory of an invariant pair the result is constant; the flatness is
 * what drift() measures.
 */
GridFunction noether_constant(const Lagrangian& lagrangian,
                              const TransformationFamily& phi,
                              const GridFunction& trajectory);

/**
 * Backward-difference mirror of noether_constant:
 *
 *   I(t_k) = dLdv(u(t_k), u^nabla(t_k), t_k) . dPhidtheta(0, u(rho(t_k)))
 *
 * on the nabla-differentiable window [1, N).
 */
GridFunction noether_constant_nabla(const Lagrangian& lagrangian,
                                    const TransformationFamily& phi,
                                    const GridFunction& trajectory);

/// Flatness of a scalar grid function: the largest absolute deviation from
/// the mean, and the least-squares slope against grid time.  A single-point
/// window reports zero for both.
DriftReport drift(const GridFunction& values);

}  // namespace tsvar
