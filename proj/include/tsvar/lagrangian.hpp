#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace tsvar {

/// One term of a polynomial Lagrangian:
///   coeff * prod_i x_i^{x_powers[i]} * prod_i v_i^{v_powers[i]} * t^{t_power}.
struct Monomial {
  double coeff = 0.0;
  std::vector<int> x_powers;
  std::vector<int> v_powers;
  int t_power = 0;
};

/**
 * A Lagrangian L(x, v, t) from a closed catalog with analytic first and
 * second derivatives (no numeric differentiation anywhere in the library;
 * finite differences appear only as checks).
 *
 * Catalog:
 *   quadratic       L = 1/2 v'Mv - 1/2 x'Kx + c'x      (M, K symmetric)
 *   counterexample  L = x + v^2/2                       (n = 1)
 *   rotational      L = |x|^2 + |v|^2                   (n = 2)
 *   polynomial      finite sum of monomials in x, v, t
 *
 * Every factory runs a construction self-check comparing grad_x/grad_v
 * against central finite differences of value() at fixed random probe
 * points (1e-6 relative); a mismatch throws std::logic_error.
 */
class Lagrangian {
 public:
  using Vec = Eigen::VectorXd;
  using Mat = Eigen::MatrixXd;

  static Lagrangian quadratic(Mat mass, Mat stiffness, Vec load);
  static Lagrangian counterexample();
  static Lagrangian rotational();
  static Lagrangian polynomial(Eigen::Index dimension,
                               std::vector<Monomial> terms);

  [[nodiscard]] Eigen::Index dimension() const noexcept { return dim_; }
  [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

  [[nodiscard]] double value(const Vec& x, const Vec& v, double t) const;
  [[nodiscard]] Vec grad_x(const Vec& x, const Vec& v, double t) const;
  [[nodiscard]] Vec grad_v(const Vec& x, const Vec& v, double t) const;
  /// Second derivatives; hess_xv(i, j) = d2L / dx_i dv_j.
  [[nodiscard]] Mat hess_xx(const Vec& x, const Vec& v, double t) const;
  [[nodiscard]] Mat hess_vv(const Vec& x, const Vec& v, double t) const;
  [[nodiscard]] Mat hess_xv(const Vec& x, const Vec& v, double t) const;

 private:
  using ScalarFn = std::function<double(const Vec&, const Vec&, double)>;
  using VecFn = std::function<Vec(const Vec&, const Vec&, double)>;
  using MatFn = std::function<Mat(const Vec&, const Vec&, double)>;

  Lagrangian(std::string kind, Eigen::Index dim, ScalarFn value, VecFn gx,
             VecFn gv, MatFn hxx, MatFn hvv, MatFn hxv);

  void check_arguments(const Vec& x, const Vec& v) const;
  void self_check() const;

  std::string kind_;
  Eigen::Index dim_ = 0;
  ScalarFn value_;
  VecFn grad_x_;
  VecFn grad_v_;
  MatFn hess_xx_;
  MatFn hess_vv_;
  MatFn hess_xv_;
};

}  // namespace tsvar
