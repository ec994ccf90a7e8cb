#include "tsvar/transformation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace tsvar {
namespace {

constexpr unsigned kProbeSeed = 0x905e78u;
constexpr int kIdentityProbes = 8;

void require_plane(Eigen::Index dimension, Eigen::Index axis_i,
                   Eigen::Index axis_j) {
  if (dimension < 2) {
    throw std::invalid_argument(
        "TransformationFamily::rotation: need dimension >= 2, got " +
        std::to_string(dimension));
  }
  if (axis_i < 0 || axis_i >= dimension || axis_j < 0 || axis_j >= dimension) {
    throw std::invalid_argument(
        "TransformationFamily::rotation: plane (" + std::to_string(axis_i) +
        ", " + std::to_string(axis_j) + ") outside dimension " +
        std::to_string(dimension));
  }
  if (axis_i == axis_j) {
    throw std::invalid_argument(
        "TransformationFamily::rotation: plane axes must differ");
  }
}

}  // namespace

TransformationFamily::TransformationFamily(std::string kind,
                                           Eigen::Index dimension, double eta,
                                           Map map, Map derivative)
    : kind_(std::move(kind)),
      dimension_(dimension),
      eta_(eta),
      map_(std::move(map)),
      derivative_(std::move(derivative)) {
  if (dimension_ < 1) {
    throw std::invalid_argument(
        "TransformationFamily: state dimension must be positive");
  }
  if (!std::isfinite(eta_) || eta_ <= 0.0) {
    throw std::invalid_argument(
        "TransformationFamily: eta must be positive and finite");
  }
  require_identity_at_zero();
}

void TransformationFamily::require_identity_at_zero() const {
  std::mt19937_64 rng(kProbeSeed);
  std::uniform_real_distribution<double> coordinate(-2.0, 2.0);
  for (int probe = 0; probe < kIdentityProbes; ++probe) {
    Eigen::VectorXd x(dimension_);
    for (Eigen::Index i = 0; i < dimension_; ++i) {
      x(i) = coordinate(rng);
    }
    if (!(map_(0.0, x) - x).isZero(0.0)) {
      throw std::logic_error("TransformationFamily (" + kind_ +
                             "): Phi(0, x) must equal x");
    }
  }
}

void TransformationFamily::check_argument(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument("TransformationFamily (" + kind_ +
                                "): argument has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dimension_));
  }
}

Eigen::VectorXd TransformationFamily::apply(double theta,
                                            const Eigen::VectorXd& x) const {
  check_argument(x);
  return map_(theta, x);
}

Eigen::VectorXd TransformationFamily::theta_derivative(
    double theta, const Eigen::VectorXd& x) const {
  check_argument(x);
  return derivative_(theta, x);
}

TransformationFamily TransformationFamily::translation(
    Eigen::VectorXd direction, double eta) {
  if (direction.size() == 0) {
    throw std::invalid_argument(
        "TransformationFamily::translation: empty direction");
  }
  const Eigen::Index dim = direction.size();
  Map map = [direction](double theta, const Eigen::VectorXd& x) {
    return Eigen::VectorXd(x + theta * direction);
  };
  Map derivative = [direction](double, const Eigen::VectorXd&) {
    return direction;
  };
  return TransformationFamily("translation", dim, eta, std::move(map),
                              std::move(derivative));
}

TransformationFamily TransformationFamily::rotation(Eigen::Index dimension,
                                                    Eigen::Index axis_i,
                                                    Eigen::Index axis_j,
                                                    double eta) {
  require_plane(dimension, axis_i, axis_j);
  Map map = [axis_i, axis_j](double theta, const Eigen::VectorXd& x) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::VectorXd y = x;
    y(axis_i) = c * x(axis_i) - s * x(axis_j);
    y(axis_j) = s * x(axis_i) + c * x(axis_j);
    return y;
  };
  Map derivative = [axis_i, axis_j](double theta, const Eigen::VectorXd& x) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
    y(axis_i) = -s * x(axis_i) - c * x(axis_j);
    y(axis_j) = c * x(axis_i) - s * x(axis_j);
    return y;
  };
  return TransformationFamily("rotation", dimension, eta, std::move(map),
                              std::move(derivative));
}

TransformationFamily TransformationFamily::linear_flow(
    Eigen::MatrixXd generator, double eta) {
  if (generator.rows() == 0 || generator.rows() != generator.cols()) {
    throw std::invalid_argument(
        "TransformationFamily::linear_flow: generator must be square and "
        "non-empty");
  }
  if (!generator.allFinite()) {
    throw std::invalid_argument(
        "TransformationFamily::linear_flow: generator has non-finite entries");
  }
  const Eigen::Index dim = generator.rows();
  Map map = [generator](double theta, const Eigen::VectorXd& x) {
    return Eigen::VectorXd(matrix_exponential(theta * generator) * x);
  };
  Map derivative = [generator](double theta, const Eigen::VectorXd& x) {
    return Eigen::VectorXd(generator *
                           (matrix_exponential(theta * generator) * x));
  };
  return TransformationFamily("linear_flow", dim, eta, std::move(map),
                              std::move(derivative));
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument(
        "matrix_exponential: matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("matrix_exponential: non-finite entries");
  }
  // Scale until the infinity norm is at most 1/2, sum the power series of
  // the scaled matrix, then undo the scaling by repeated squaring.
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd scaled = a * std::ldexp(1.0, -squarings);

  Eigen::MatrixXd sum =
      Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = sum;
  for (int k = 1; k <= 32; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    if (term.isZero(0.0)) {
      break;
    }
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-17 * sum.cwiseAbs().maxCoeff()) {
      break;
    }
  }
  for (int s = 0; s < squarings; ++s) {
    sum = (sum * sum).eval();
  }
  return sum;
}

}  // namespace tsvar
