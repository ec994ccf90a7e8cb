#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "support/generators.hpp"
#include "tsvar/calculus.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/grid_scale.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/noether.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/transformation.hpp"

namespace {

using tsvar::GridFunction;
using tsvar::GridScale;
using tsvar::Lagrangian;
using tsvar::TransformationFamily;

Lagrangian kinetic_only() {
  return Lagrangian::quadratic(Eigen::MatrixXd::Identity(1, 1),
                               Eigen::MatrixXd::Zero(1, 1),
                               Eigen::VectorXd::Zero(1));
}

/// Deterministic non-uniform grid on [0, 1] with t_0 = 0 and t_{n-1} = 1.
GridScale jittered_unit_grid(std::size_t n) {
  std::vector<double> points(n);
  for (std::size_t k = 0; k < n; ++k) {
    points[k] =
        static_cast<double>(k) + 0.3 * std::sin(2.7 * static_cast<double>(k));
  }
  const double span = points.back();
  for (double& p : points) {
    p /= span;
  }
  return GridScale::from_points(points);
}

/// Trajectory with smooth, O(1) values and difference quotients.
GridFunction smooth_planar_trajectory(const GridScale& scale) {
  return GridFunction::sample(scale, 2, [](double t) {
    Eigen::VectorXd x(2);
    x << std::cos(t) + 0.2 * t, std::sin(t) - 0.1 * t * t;
    return x;
  });
}

Eigen::MatrixXd planar_rotation_generator() {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, -1.0, 1.0, 0.0;
  return a;
}

}  // namespace

TEST_CASE("transformation catalog is the identity at parameter zero") {
  std::mt19937_64 rng(0x51c3b2u);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);

  Eigen::VectorXd direction(3);
  direction << 0.5, -1.0, 2.0;
  const auto translation = TransformationFamily::translation(direction);
  const auto rotation = TransformationFamily::rotation(4, 1, 3);
  Eigen::MatrixXd generator(3, 3);
  generator << 0.2, -1.1, 0.4, 0.9, 0.0, -0.3, -0.5, 0.6, 0.1;
  const auto flow = TransformationFamily::linear_flow(generator);

  CHECK(translation.kind() == "translation");
  CHECK(rotation.kind() == "rotation");
  CHECK(flow.kind() == "linear_flow");
  CHECK(translation.dimension() == 3);
  CHECK(rotation.dimension() == 4);
  CHECK(flow.dimension() == 3);
  CHECK(translation.eta() == 1.0);

  for (int probe = 0; probe < 100; ++probe) {
    Eigen::VectorXd x3(3);
    Eigen::VectorXd x4(4);
    for (int i = 0; i < 3; ++i) x3(i) = coord(rng);
    for (int i = 0; i < 4; ++i) x4(i) = coord(rng);
    CHECK((translation.apply(0.0, x3) - x3).isZero(0.0));
    CHECK((rotation.apply(0.0, x4) - x4).isZero(0.0));
    CHECK((flow.apply(0.0, x3) - x3).isZero(0.0));
  }
}

TEST_CASE("theta derivatives match central differences") {
  std::mt19937_64 rng(0x3f81adu);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);

  Eigen::VectorXd direction(3);
  direction << 1.5, -0.25, 0.75;
  Eigen::MatrixXd generator(3, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      generator(r, c) = entry(rng);
    }
  }
  const std::vector<TransformationFamily> catalog = {
      TransformationFamily::translation(direction, 0.8),
      TransformationFamily::rotation(3, 0, 2, 2.0),
      TransformationFamily::linear_flow(generator, 1.5),
  };

  const double h = 1e-6;
  for (const auto& family : catalog) {
    CAPTURE(family.kind());
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd x(family.dimension());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = coord(rng);
      for (double theta : {0.0, 0.4 * family.eta(), -0.9 * family.eta()}) {
        const Eigen::VectorXd analytic = family.theta_derivative(theta, x);
        const Eigen::VectorXd fd =
            (family.apply(theta + h, x) - family.apply(theta - h, x)) /
            (2.0 * h);
        const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
        CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("matrix exponential matches closed forms") {
  SUBCASE("zero matrix gives the exact identity") {
    const Eigen::MatrixXd e =
        tsvar::matrix_exponential(Eigen::MatrixXd::Zero(3, 3));
    CHECK((e - Eigen::MatrixXd::Identity(3, 3)).isZero(0.0));
  }

  SUBCASE("scalar case") {
    Eigen::MatrixXd a(1, 1);
    a << 0.8;
    CHECK(tsvar::matrix_exponential(a)(0, 0) ==
          doctest::Approx(std::exp(0.8)).epsilon(1e-14));
    a << -3.7;
    CHECK(tsvar::matrix_exponential(a)(0, 0) ==
          doctest::Approx(std::exp(-3.7)).epsilon(1e-14));
  }

  SUBCASE("planar rotation generator") {
    const Eigen::MatrixXd j = planar_rotation_generator();
    for (double theta : {0.3, 0.7, -1.2, 2.5}) {
      const Eigen::MatrixXd e = tsvar::matrix_exponential(theta * j);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      CHECK(e(0, 0) == doctest::Approx(c).epsilon(1e-14));
      CHECK(e(0, 1) == doctest::Approx(-s).epsilon(1e-14));
      CHECK(e(1, 0) == doctest::Approx(s).epsilon(1e-14));
      CHECK(e(1, 1) == doctest::Approx(c).epsilon(1e-14));
    }
  }

  SUBCASE("nilpotent generator truncates the series") {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 5.0, 0.0, 0.0;
    const Eigen::MatrixXd e = tsvar::matrix_exponential(a);
    CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e(0, 1) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(e(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("linear flow of the rotation generator is the rotation family") {
    const auto flow =
        TransformationFamily::linear_flow(planar_rotation_generator());
    const auto rotation = TransformationFamily::rotation(2, 0, 1);
    std::mt19937_64 rng(0x77e01bu);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (double theta : {-0.9, 0.3, 1.7}) {
      Eigen::VectorXd x(2);
      x << coord(rng), coord(rng);
      CHECK((flow.apply(theta, x) - rotation.apply(theta, x))
                .cwiseAbs()
                .maxCoeff() <= 1e-13);
      CHECK((flow.theta_derivative(theta, x) -
             rotation.theta_derivative(theta, x))
                .cwiseAbs()
                .maxCoeff() <= 1e-13);
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(tsvar::matrix_exponential(Eigen::MatrixXd::Zero(2, 3)),
                    std::invalid_argument);
    Eigen::MatrixXd bad(1, 1);
    bad << std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(tsvar::matrix_exponential(bad), std::invalid_argument);
  }
}

TEST_CASE("transformation construction and evaluation validate input") {
  CHECK_THROWS_AS(TransformationFamily::translation(Eigen::VectorXd()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      TransformationFamily::translation(Eigen::VectorXd::Ones(2), -1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(TransformationFamily::rotation(1, 0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransformationFamily::rotation(3, 0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransformationFamily::rotation(3, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransformationFamily::linear_flow(Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);

  const auto family = TransformationFamily::rotation(2, 0, 1);
  CHECK_THROWS_AS(family.apply(0.1, Eigen::VectorXd::Ones(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(family.theta_derivative(0.1, Eigen::VectorXd::Ones(1)),
                  std::invalid_argument);
}

TEST_CASE("invariance check certifies the symmetric catalog pairs") {
  const GridScale scale = GridScale::uniform(0.0, 2.0, 41);

  SUBCASE("rotational Lagrangian under planar rotation") {
    const auto lagrangian = Lagrangian::rotational();
    const auto rotation = TransformationFamily::rotation(2, 0, 1);
    const GridFunction u = smooth_planar_trajectory(scale);
    const auto report = tsvar::check_invariance(lagrangian, rotation, u, 9, 1e-12);
    CHECK(report.invariant);
    CHECK(report.max_theta_variation < 1e-12);
    CHECK(report.probed_thetas.size() == 9);
    CHECK(report.probed_thetas.front() == doctest::Approx(-1.0));
    CHECK(report.probed_thetas.back() == doctest::Approx(1.0));
  }

  SUBCASE("rotation invariance also holds on rough random trajectories") {
    std::mt19937_64 rng(0x42aa19u);
    for (int trial = 0; trial < 5; ++trial) {
      const GridScale rough = tsvar::testing::random_scale(rng, 4, 20);
      const GridFunction u = tsvar::testing::random_function(rng, rough, 2);
      const auto report = tsvar::check_invariance(
          Lagrangian::rotational(), TransformationFamily::rotation(2, 0, 1), u,
          7, 1e-12);
      CHECK(report.invariant);
    }
  }

  SUBCASE("kinetic Lagrangian under translation") {
    const auto lagrangian = kinetic_only();
    const auto translation =
        TransformationFamily::translation(Eigen::VectorXd::Ones(1));
    const GridFunction u =
        GridFunction::sample_scalar(scale, [](double t) { return std::sin(t); });
    const auto report =
        tsvar::check_invariance(lagrangian, translation, u, 9, 1e-12);
    CHECK(report.invariant);
    CHECK(report.max_theta_variation < 1e-13);
  }

  SUBCASE("state-dependent Lagrangian under translation is not invariant") {
    const auto lagrangian = Lagrangian::counterexample();
    const auto translation = TransformationFamily::translation(
        Eigen::VectorXd::Ones(1), 0.5);
    const GridFunction u =
        GridFunction::sample_scalar(scale, [](double t) { return t * t; });
    const auto report =
        tsvar::check_invariance(lagrangian, translation, u, 9, 1e-10);
    CHECK_FALSE(report.invariant);
    // The integrand shifts by exactly theta, so the worst deviation over
    // [-eta, eta] is eta itself.
    CHECK(report.max_theta_variation ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("invariance check validates input") {
  const GridScale scale = GridScale::uniform(0.0, 1.0, 5);
  const GridFunction u =
      GridFunction::sample_scalar(scale, [](double t) { return t; });
  const auto translation =
      TransformationFamily::translation(Eigen::VectorXd::Ones(1));

  CHECK_THROWS_AS(
      tsvar::check_invariance(kinetic_only(), translation, u, 4, 1e-10),
      std::invalid_argument);
  CHECK_THROWS_AS(
      tsvar::check_invariance(kinetic_only(), translation, u, 9, 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      tsvar::check_invariance(Lagrangian::rotational(), translation, u, 9,
                              1e-10),
      std::invalid_argument);
  CHECK_THROWS_AS(
      tsvar::check_invariance(
          kinetic_only(), TransformationFamily::rotation(2, 0, 1), u, 9, 1e-10),
      std::invalid_argument);

  const GridFunction windowed(scale, 1, Eigen::MatrixXd::Ones(3, 1));
  CHECK_THROWS_AS(
      tsvar::check_invariance(kinetic_only(), translation, windowed, 9, 1e-10),
      std::invalid_argument);
  CHECK_THROWS_AS(tsvar::noether_constant(kinetic_only(), translation, windowed),
                  std::invalid_argument);
}

TEST_CASE("conserved quantity evaluation follows the shifted-point formulas") {
  // Hand oracle on {0, 1, 2}: rotational L has dLdv = 2v, and the rotation
  // family has dPhidtheta(0, x) = (-x_1, x_0).
  const GridScale scale = GridScale::from_points({0.0, 1.0, 2.0});
  Eigen::MatrixXd values(3, 2);
  values << 1.0, 2.0, 3.0, 5.0, 4.0, 7.0;
  const GridFunction u(scale, values);
  const auto lagrangian = Lagrangian::rotational();
  const auto rotation = TransformationFamily::rotation(2, 0, 1);

  const GridFunction forward = tsvar::noether_constant(lagrangian, rotation, u);
  CHECK(forward.first_index() == 0);
  CHECK(forward.count() == 2);
  CHECK(forward.dimension() == 1);
  CHECK(forward.scalar(0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(forward.scalar(1) == doctest::Approx(2.0).epsilon(1e-14));

  const GridFunction backward =
      tsvar::noether_constant_nabla(lagrangian, rotation, u);
  CHECK(backward.first_index() == 1);
  CHECK(backward.count() == 2);
  CHECK(backward.scalar(1) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(backward.scalar(2) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(
      tsvar::noether_constant(kinetic_only(), rotation, u),
      std::invalid_argument);
  CHECK_THROWS_AS(
      tsvar::noether_constant(
          lagrangian, TransformationFamily::translation(Eigen::VectorXd::Ones(3)),
          u),
      std::invalid_argument);
}

TEST_CASE("straight free motion conserves its momentum exactly") {
  std::mt19937_64 rng(0x6b90c4u);
  const auto lagrangian = kinetic_only();
  const auto translation =
      TransformationFamily::translation(Eigen::VectorXd::Ones(1));

  for (int trial = 0; trial < 10; ++trial) {
    const GridScale scale = tsvar::testing::random_scale(rng, 3, 30);
    const GridFunction u =
        GridFunction::sample_scalar(scale, [](double t) { return t; });

    const GridFunction forward =
        tsvar::noether_constant(lagrangian, translation, u);
    for (std::size_t k = forward.first_index(); k < forward.end_index(); ++k) {
      CHECK(forward.scalar(k) == 1.0);
    }
    const auto forward_drift = tsvar::drift(forward);
    CHECK(forward_drift.max_abs_deviation_from_mean == 0.0);
    CHECK(forward_drift.linear_slope == 0.0);

    const GridFunction backward =
        tsvar::noether_constant_nabla(lagrangian, translation, u);
    for (std::size_t k = backward.first_index(); k < backward.end_index();
         ++k) {
      CHECK(backward.scalar(k) == 1.0);
    }
    const auto backward_drift = tsvar::drift(backward);
    CHECK(backward_drift.max_abs_deviation_from_mean == 0.0);
    CHECK(backward_drift.linear_slope == 0.0);
  }
}

TEST_CASE("non-invariant pair yields a visibly non-constant quantity") {
  // Critical trajectory of L = x + v^2/2: u accumulates mu_k * sigma(t_k),
  // so its difference quotient -- and with it the would-be conserved
  // quantity -- equals sigma(t), which genuinely varies.
  std::vector<double> points;
  points.push_back(0.0);
  for (int j = 6; j >= 1; --j) {
    double factorial = 1.0;
    for (int i = 2; i <= j; ++i) factorial *= i;
    points.push_back(1.0 / factorial);
  }
  const GridScale scale = GridScale::from_points(points);
  const std::size_t n = scale.size();

  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), 1);
  values(0, 0) = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    values(static_cast<Eigen::Index>(k) + 1, 0) =
        values(static_cast<Eigen::Index>(k), 0) + scale.mu(k) * scale.sigma(k);
  }
  const GridFunction u(scale, values);

  const auto translation =
      TransformationFamily::translation(Eigen::VectorXd::Ones(1));
  const GridFunction quantity =
      tsvar::noether_constant(Lagrangian::counterexample(), translation, u);
  for (std::size_t k = quantity.first_index(); k < quantity.end_index(); ++k) {
    CHECK(quantity.scalar(k) ==
          doctest::Approx(scale.sigma(k)).epsilon(1e-12));
  }
  const auto report = tsvar::drift(quantity);
  CHECK(report.max_abs_deviation_from_mean > 0.1);
}

TEST_CASE("solved symmetric dynamics conserve the quantity end to end") {
  const auto lagrangian = Lagrangian::rotational();
  const auto rotation = TransformationFamily::rotation(2, 0, 1);

  tsvar::BVProblem problem{lagrangian, GridScale::uniform(0.0, 1.0, 201),
                           Eigen::VectorXd(2), Eigen::VectorXd(2),
                           tsvar::ELMode::nonshifted_nabla_delta};
  problem.ua << 1.0, 0.3;
  problem.ub << 0.8, 1.1;
  tsvar::SolveOptions options;
  options.newton_tol = 1e-10;

  SUBCASE("forward-difference constant on a nabla-of-delta solution") {
    const auto solved = tsvar::solve_bvp(problem, options);
    REQUIRE(solved.converged);

    const auto invariance =
        tsvar::check_invariance(lagrangian, rotation, solved.trajectory, 9,
                                1e-12);
    CHECK(invariance.invariant);
    CHECK(invariance.max_theta_variation < 1e-12);

    const GridFunction quantity =
        tsvar::noether_constant(lagrangian, rotation, solved.trajectory);
    const auto report = tsvar::drift(quantity);
    CHECK(report.max_abs_deviation_from_mean < 10.0 * options.newton_tol);
    CHECK(std::abs(report.linear_slope) < 1e-8);

    // The proof's key step: the backward difference quotient of the
    // quantity vanishes at interior points of a critical trajectory.
    const GridFunction rate = tsvar::nabla_derivative(quantity);
    CHECK(rate.values().cwiseAbs().maxCoeff() < 10.0 * options.newton_tol);
  }

  SUBCASE("backward-difference constant on a delta-of-nabla solution") {
    problem.mode = tsvar::ELMode::nonshifted_delta_nabla;
    const auto solved = tsvar::solve_bvp(problem, options);
    REQUIRE(solved.converged);

    const GridFunction quantity =
        tsvar::noether_constant_nabla(lagrangian, rotation, solved.trajectory);
    const auto report = tsvar::drift(quantity);
    CHECK(report.max_abs_deviation_from_mean < 10.0 * options.newton_tol);
  }

  SUBCASE("translation symmetry of the solved free particle") {
    tsvar::BVProblem line{kinetic_only(), jittered_unit_grid(31),
                          Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1),
                          tsvar::ELMode::nonshifted_nabla_delta};
    const auto solved = tsvar::solve_bvp(line);
    REQUIRE(solved.converged);
    const GridFunction quantity = tsvar::noether_constant(
        kinetic_only(),
        TransformationFamily::translation(Eigen::VectorXd::Ones(1)),
        solved.trajectory);
    for (std::size_t k = quantity.first_index(); k < quantity.end_index();
         ++k) {
      CHECK(quantity.scalar(k) == 1.0);
    }
    const auto report = tsvar::drift(quantity);
    CHECK(report.max_abs_deviation_from_mean < 1e-13);
  }
}

TEST_CASE("flatness statistics") {
  const GridScale scale = GridScale::from_points({0.0, 1.0, 2.0});

  SUBCASE("constant input") {
    const GridFunction ones(scale, Eigen::MatrixXd::Ones(3, 1));
    const auto report = tsvar::drift(ones);
    CHECK(report.max_abs_deviation_from_mean == 0.0);
    CHECK(report.linear_slope == 0.0);
  }

  SUBCASE("linear input has unit slope") {
    const GridFunction line =
        GridFunction::sample_scalar(scale, [](double t) { return t; });
    const auto report = tsvar::drift(line);
    CHECK(report.linear_slope == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(report.max_abs_deviation_from_mean ==
          doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("single covered point") {
    const GridFunction one(scale, 1, Eigen::MatrixXd::Constant(1, 1, 4.2));
    const auto report = tsvar::drift(one);
    CHECK(report.max_abs_deviation_from_mean == 0.0);
    CHECK(report.linear_slope == 0.0);
  }

  SUBCASE("vector input is rejected") {
    const GridFunction planar(scale, Eigen::MatrixXd::Ones(3, 2));
    CHECK_THROWS_AS(tsvar::drift(planar), std::invalid_argument);
  }
}
