#include "tsvar/lagrangian.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tsvar {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// d-th derivative of s -> s^n evaluated at s, for d in {0, 1, 2}.
double power_term(double s, int n, int d) {
  if (d == 0) return std::pow(s, n);
  if (d == 1) return n == 0 ? 0.0 : n * std::pow(s, n - 1);
  return n < 2 ? 0.0 : static_cast<double>(n) * (n - 1) * std::pow(s, n - 2);
}

/// Evaluates one monomial with derivative order dx_order applied to
/// component dx_comp of x and dv_order applied to component dv_comp of v.
double monomial_eval(const Monomial& m, const Vec& x, const Vec& v, double t,
                     Eigen::Index dx_comp, int dx_order, Eigen::Index dv_comp,
                     int dv_order) {
  double out = m.coeff * std::pow(t, m.t_power);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int order = i == dx_comp ? dx_order : 0;
    out *= power_term(x[i], m.x_powers[static_cast<std::size_t>(i)], order);
    if (out == 0.0) return 0.0;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int order = i == dv_comp ? dv_order : 0;
    out *= power_term(v[i], m.v_powers[static_cast<std::size_t>(i)], order);
    if (out == 0.0) return 0.0;
  }
  return out;
}

/// Second derivative of a monomial in two distinct x components (or the
/// diagonal case when j == l).
double monomial_xx(const Monomial& m, const Vec& x, const Vec& v, double t,
                   Eigen::Index j, Eigen::Index l) {
  if (j == l) return monomial_eval(m, x, v, t, j, 2, -1, 0);
  double out = m.coeff * std::pow(t, m.t_power);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int order = (i == j || i == l) ? 1 : 0;
    out *= power_term(x[i], m.x_powers[static_cast<std::size_t>(i)], order);
    if (out == 0.0) return 0.0;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out *= power_term(v[i], m.v_powers[static_cast<std::size_t>(i)], 0);
    if (out == 0.0) return 0.0;
  }
  return out;
}

double monomial_vv(const Monomial& m, const Vec& x, const Vec& v, double t,
                   Eigen::Index j, Eigen::Index l) {
  if (j == l) return monomial_eval(m, x, v, t, -1, 0, j, 2);
  double out = m.coeff * std::pow(t, m.t_power);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out *= power_term(x[i], m.x_powers[static_cast<std::size_t>(i)], 0);
    if (out == 0.0) return 0.0;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int order = (i == j || i == l) ? 1 : 0;
    out *= power_term(v[i], m.v_powers[static_cast<std::size_t>(i)], order);
    if (out == 0.0) return 0.0;
  }
  return out;
}

void require_symmetric(const Mat& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(name) + " matrix must be square");
  }
  if (m.rows() == 0) {
    throw std::invalid_argument(std::string(name) +
                                " matrix must be non-empty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument(std::string(name) +
                                " matrix must be symmetric");
  }
}

}  // namespace

Lagrangian::Lagrangian(std::string kind, Eigen::Index dim, ScalarFn value,
                       VecFn gx, VecFn gv, MatFn hxx, MatFn hvv, MatFn hxv)
    : kind_(std::move(kind)),
      dim_(dim),
      value_(std::move(value)),
      grad_x_(std::move(gx)),
      grad_v_(std::move(gv)),
      hess_xx_(std::move(hxx)),
      hess_vv_(std::move(hvv)),
      hess_xv_(std::move(hxv)) {
  self_check();
}

void Lagrangian::check_arguments(const Vec& x, const Vec& v) const {
  if (x.size() != dim_ || v.size() != dim_) {
    std::ostringstream msg;
    msg << "Lagrangian of dimension " << dim_ << " evaluated with state size "
        << x.size() << " and velocity size " << v.size();
    throw std::invalid_argument(msg.str());
  }
}

double Lagrangian::value(const Vec& x, const Vec& v, double t) const {
  check_arguments(x, v);
  return value_(x, v, t);
}

Vec Lagrangian::grad_x(const Vec& x, const Vec& v, double t) const {
  check_arguments(x, v);
  return grad_x_(x, v, t);
}

Vec Lagrangian::grad_v(const Vec& x, const Vec& v, double t) const {
  check_arguments(x, v);
  return grad_v_(x, v, t);
}

Mat Lagrangian::hess_xx(const Vec& x, const Vec& v, double t) const {
  check_arguments(x, v);
  return hess_xx_(x, v, t);
}

Mat Lagrangian::hess_vv(const Vec& x, const Vec& v, double t) const {
  check_arguments(x, v);
  return hess_vv_(x, v, t);
}

Mat Lagrangian::hess_xv(const Vec& x, const Vec& v, double t) const {
  check_arguments(x, v);
  return hess_xv_(x, v, t);
}

void Lagrangian::self_check() const {
  // Compare both analytic gradients against central differences of value()
  // at a handful of deterministic probe points.  This guards every catalog
  // entry (and in particular hand-entered polynomial derivatives) at the
  // moment of construction.
  std::mt19937_64 rng(0x1a9ca5u);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> instant(0.1, 2.0);
  constexpr double kStep = 1e-6;
  constexpr double kTol = 1e-6;
  for (int probe = 0; probe < 5; ++probe) {
    Vec x(dim_);
    Vec v(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) x[i] = coord(rng);
    for (Eigen::Index i = 0; i < dim_; ++i) v[i] = coord(rng);
    const double t = instant(rng);
    const Vec gx = grad_x_(x, v, t);
    const Vec gv = grad_v_(x, v, t);
    if (gx.size() != dim_ || gv.size() != dim_) {
      throw std::logic_error("Lagrangian gradient has wrong dimension");
    }
    for (Eigen::Index i = 0; i < dim_; ++i) {
      Vec xp = x;
      Vec xm = x;
      xp[i] += kStep;
      xm[i] -= kStep;
      const double fd_x = (value_(xp, v, t) - value_(xm, v, t)) / (2 * kStep);
      Vec vp = v;
      Vec vm = v;
      vp[i] += kStep;
      vm[i] -= kStep;
      const double fd_v = (value_(x, vp, t) - value_(x, vm, t)) / (2 * kStep);
      const double scale_x = std::max({1.0, std::abs(gx[i]), std::abs(fd_x)});
      const double scale_v = std::max({1.0, std::abs(gv[i]), std::abs(fd_v)});
      if (std::abs(fd_x - gx[i]) > kTol * scale_x ||
          std::abs(fd_v - gv[i]) > kTol * scale_v) {
        throw std::logic_error(
            "Lagrangian self-check failed: analytic gradient disagrees with "
            "central differences");
      }
    }
  }
}

Lagrangian Lagrangian::quadratic(Mat mass, Mat stiffness, Vec load) {
  require_symmetric(mass, "mass");
  require_symmetric(stiffness, "stiffness");
  if (stiffness.rows() != mass.rows() || load.size() != mass.rows()) {
    throw std::invalid_argument(
        "quadratic Lagrangian blocks must share one dimension");
  }
  const Eigen::Index n = mass.rows();
  auto m = std::make_shared<Mat>(std::move(mass));
  auto k = std::make_shared<Mat>(std::move(stiffness));
  auto c = std::make_shared<Vec>(std::move(load));
  return Lagrangian(
      "quadratic", n,
      [m, k, c](const Vec& x, const Vec& v, double) {
        return 0.5 * v.dot(*m * v) - 0.5 * x.dot(*k * x) + c->dot(x);
      },
      [k, c](const Vec& x, const Vec&, double) -> Vec { return -*k * x + *c; },
      [m](const Vec&, const Vec& v, double) -> Vec { return *m * v; },
      [k](const Vec&, const Vec&, double) -> Mat { return -*k; },
      [m](const Vec&, const Vec&, double) -> Mat { return *m; },
      [n](const Vec&, const Vec&, double) -> Mat { return Mat::Zero(n, n); });
}

Lagrangian Lagrangian::counterexample() {
  return Lagrangian(
      "counterexample", 1,
      [](const Vec& x, const Vec& v, double) { return x[0] + 0.5 * v[0] * v[0]; },
      [](const Vec&, const Vec&, double) -> Vec { return Vec::Ones(1); },
      [](const Vec&, const Vec& v, double) -> Vec { return v; },
      [](const Vec&, const Vec&, double) -> Mat { return Mat::Zero(1, 1); },
      [](const Vec&, const Vec&, double) -> Mat { return Mat::Ones(1, 1); },
      [](const Vec&, const Vec&, double) -> Mat { return Mat::Zero(1, 1); });
}

Lagrangian Lagrangian::rotational() {
  return Lagrangian(
      "rotational", 2,
      [](const Vec& x, const Vec& v, double) {
        return x.squaredNorm() + v.squaredNorm();
      },
      [](const Vec& x, const Vec&, double) -> Vec { return 2.0 * x; },
      [](const Vec&, const Vec& v, double) -> Vec { return 2.0 * v; },
      [](const Vec&, const Vec&, double) -> Mat {
        return 2.0 * Mat::Identity(2, 2);
      },
      [](const Vec&, const Vec&, double) -> Mat {
        return 2.0 * Mat::Identity(2, 2);
      },
      [](const Vec&, const Vec&, double) -> Mat { return Mat::Zero(2, 2); });
}

Lagrangian Lagrangian::polynomial(Eigen::Index dimension,
                                  std::vector<Monomial> terms) {
  if (dimension < 1) {
    throw std::invalid_argument("polynomial Lagrangian needs dimension >= 1");
  }
  const auto n = static_cast<std::size_t>(dimension);
  for (const Monomial& m : terms) {
    if (m.x_powers.size() != n || m.v_powers.size() != n) {
      throw std::invalid_argument(
          "monomial exponent lists must match the Lagrangian dimension");
    }
    if (!std::isfinite(m.coeff)) {
      throw std::invalid_argument("monomial coefficient must be finite");
    }
    if (m.t_power < 0) {
      throw std::invalid_argument("monomial time exponent must be >= 0");
    }
    for (int p : m.x_powers) {
      if (p < 0) throw std::invalid_argument("monomial exponents must be >= 0");
    }
    for (int p : m.v_powers) {
      if (p < 0) throw std::invalid_argument("monomial exponents must be >= 0");
    }
  }
  auto shared = std::make_shared<std::vector<Monomial>>(std::move(terms));
  const Eigen::Index dim = dimension;
  return Lagrangian(
      "polynomial", dim,
      [shared](const Vec& x, const Vec& v, double t) {
        double out = 0.0;
        for (const Monomial& m : *shared) {
          out += monomial_eval(m, x, v, t, -1, 0, -1, 0);
        }
        return out;
      },
      [shared, dim](const Vec& x, const Vec& v, double t) -> Vec {
        Vec g = Vec::Zero(dim);
        for (const Monomial& m : *shared) {
          for (Eigen::Index i = 0; i < dim; ++i) {
            g[i] += monomial_eval(m, x, v, t, i, 1, -1, 0);
          }
        }
        return g;
      },
      [shared, dim](const Vec& x, const Vec& v, double t) -> Vec {
        Vec g = Vec::Zero(dim);
        for (const Monomial& m : *shared) {
          for (Eigen::Index i = 0; i < dim; ++i) {
            g[i] += monomial_eval(m, x, v, t, -1, 0, i, 1);
          }
        }
        return g;
      },
      [shared, dim](const Vec& x, const Vec& v, double t) -> Mat {
        Mat h = Mat::Zero(dim, dim);
        for (const Monomial& m : *shared) {
          for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = i; j < dim; ++j) {
              const double d = monomial_xx(m, x, v, t, i, j);
              h(i, j) += d;
              if (j != i) h(j, i) += d;
            }
          }
        }
        return h;
      },
      [shared, dim](const Vec& x, const Vec& v, double t) -> Mat {
        Mat h = Mat::Zero(dim, dim);
        for (const Monomial& m : *shared) {
          for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = i; j < dim; ++j) {
              const double d = monomial_vv(m, x, v, t, i, j);
              h(i, j) += d;
              if (j != i) h(j, i) += d;
            }
          }
        }
        return h;
      },
      [shared, dim](const Vec& x, const Vec& v, double t) -> Mat {
        Mat h = Mat::Zero(dim, dim);
        for (const Monomial& m : *shared) {
          for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
              h(i, j) += monomial_eval(m, x, v, t, i, 1, j, 1);
            }
          }
        }
        return h;
      });
}

}  // namespace tsvar
