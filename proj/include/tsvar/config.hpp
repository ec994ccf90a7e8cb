#pragma once

#include <Eigen/Core>

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsvar/analytic_scale.hpp"
#include "tsvar/grid_scale.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/transformation.hpp"

namespace tsvar {

/// Any structural or semantic problem with a configuration document.  The
/// message names the JSON path of the offending node.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration schema
// ---------------------------------------------------------------------------

/// One cell of an analytic scale description.  `kind` selects which of the
/// remaining fields are meaningful:
///
///   interval    lo, hi
///   points      values
///   geometric   side, accumulation, ratio, amplitude, max_index
///   power       side, accumulation, exponent, amplitude, max_index
///   factorial   side, accumulation, amplitude, max_index
struct CellConfig {
  std::string kind = "interval";
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> values;
  std::string side = "above";
  double accumulation = 0.0;
  double ratio = 2.0;
  double exponent = 1.0;
  double amplitude = 1.0;
  std::optional<std::size_t> max_index;
};

/// Scale descriptor: an explicit uniform grid, an explicit point list, or an
/// analytic cell union.  `budget` and `interval_resolution` control how an
/// analytic scale is materialised into a finite grid for solving.
struct ScaleConfig {
  std::string kind = "uniform";
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 11;
  std::vector<double> values;
  std::vector<CellConfig> cells;
  std::size_t budget = 32;
  std::size_t interval_resolution = 9;
};

/// Lagrangian descriptor; `kind` is one of the catalog kinds
/// (quadratic | counterexample | rotational | polynomial).
struct LagrangianConfig {
  std::string kind = "counterexample";
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd load;
  Eigen::Index dimension = 1;
  std::vector<Monomial> terms;
};

struct BoundaryConfig {
  Eigen::VectorXd ua;
  Eigen::VectorXd ub;
};

struct InitialConfig {
  Eigen::VectorXd u0;
  Eigen::VectorXd u1;
};

struct SolverConfig {
  double newton_tol = 1e-12;
  int max_iterations = 50;
};

/// Transformation-family descriptor
/// (translation | rotation | linear_flow) plus invariance-probe settings.
struct TransformationConfig {
  std::string kind = "translation";
  Eigen::VectorXd direction;
  Eigen::Index dimension = 2;
  Eigen::Index plane_i = 0;
  Eigen::Index plane_j = 1;
  Eigen::MatrixXd generator;
  double eta = 1.0;
  int theta_samples = 9;
  double tolerance = 1e-10;
};

/// Convergence-study descriptor: which registered closed-form reference to
/// compare against, the grid sizes to sweep, and whether to run both the
/// non-shifted and shifted modes.
struct ConvergenceConfig {
  std::string reference = "oscillator";
  std::vector<std::size_t> sizes;
  bool compare_modes = false;
};

/// A full problem document.  Sections that a given command does not need may
/// be absent.
struct ProblemConfig {
  ScaleConfig scale;
  std::optional<LagrangianConfig> lagrangian;
  std::optional<BoundaryConfig> boundary;
  std::optional<InitialConfig> initial;
  ELMode mode = ELMode::nonshifted_nabla_delta;
  SolverConfig solver;
  std::optional<TransformationConfig> transformation;
  std::optional<ConvergenceConfig> convergence;
  std::string output_directory = "out";
};

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------

/// Parses a configuration document.  Every unknown key anywhere in the
/// document is rejected with its JSON path; structural and range errors
/// (bad kinds, non-positive tolerances, too few theta samples, ...) are
/// reported the same way.
ProblemConfig parse_config(const nlohmann::ordered_json& document);

/// Parses JSON text; syntax errors surface as ConfigError with the line and
/// column from the JSON parser.
ProblemConfig parse_config_text(const std::string& text);

ProblemConfig load_config_file(const std::string& path);

/// Canonical serialization: fixed key order, defaults materialised, absent
/// sections omitted.  Composing parse_config after to_json is the identity,
/// making parse -> serialize idempotent.
nlohmann::ordered_json to_json(const ProblemConfig& config);

// ---------------------------------------------------------------------------
// Builders from configuration sections
// ---------------------------------------------------------------------------

AnalyticScale make_analytic_scale(const ScaleConfig& config);
GridScale make_grid_scale(const ScaleConfig& config);
Lagrangian make_lagrangian(const LagrangianConfig& config);
TransformationFamily make_transformation(const TransformationConfig& config);
SolveOptions make_solve_options(const SolverConfig& config);

/// Mode tokens used by configs and the command line:
/// nabla-delta | delta-delta | delta-nabla.
ELMode parse_mode(const std::string& token);
std::string mode_token(ELMode mode);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace tsvar
