#include "tsvar/presets.hpp"

#include <cmath>
#include <utility>

#include "tsvar/grid_scale.hpp"

namespace tsvar {
namespace {

using nlohmann::ordered_json;

// -- cell builders ----------------------------------------------------------

ordered_json interval_cell(double lo, double hi) {
  ordered_json c;
  c["kind"] = "interval";
  c["lo"] = lo;
  c["hi"] = hi;
  return c;
}

ordered_json points_cell(std::vector<double> values) {
  ordered_json c;
  c["kind"] = "points";
  c["values"] = std::move(values);
  return c;
}

ordered_json geometric_cell(const char* side, double ratio) {
  ordered_json c;
  c["kind"] = "geometric";
  c["side"] = side;
  c["accumulation"] = 0.0;
  c["ratio"] = ratio;
  return c;
}

ordered_json power_cell(const char* side, double exponent) {
  ordered_json c;
  c["kind"] = "power";
  c["side"] = side;
  c["accumulation"] = 0.0;
  c["exponent"] = exponent;
  return c;
}

ordered_json factorial_cell(const char* side) {
  ordered_json c;
  c["kind"] = "factorial";
  c["side"] = side;
  c["accumulation"] = 0.0;
  return c;
}

// -- section builders -------------------------------------------------------

ordered_json analytic_scale_json(std::vector<ordered_json> cells) {
  ordered_json scale;
  scale["kind"] = "analytic";
  scale["cells"] = std::move(cells);
  return scale;
}

ordered_json uniform_scale_json(double a, double b, std::size_t n) {
  ordered_json scale;
  scale["kind"] = "uniform";
  scale["a"] = a;
  scale["b"] = b;
  scale["n"] = n;
  return scale;
}

ordered_json classify_config(const std::string& name,
                             std::vector<ordered_json> cells) {
  ordered_json j;
  j["scale"] = analytic_scale_json(std::move(cells));
  ordered_json output;
  output["directory"] = "out/" + name;
  j["output"] = std::move(output);
  return j;
}

ordered_json output_section(const std::string& name) {
  ordered_json output;
  output["directory"] = "out/" + name;
  return output;
}

/// The truncated factorial scale used by the counterexample presets:
/// 0 together with 1/k! for k = 1 .. 6.
ordered_json counterexample_scale_json() {
  ordered_json cell = factorial_cell("above");
  cell["max_index"] = 6;
  ordered_json scale = analytic_scale_json({std::move(cell)});
  scale["budget"] = 16;
  return scale;
}

/// Boundary value at b of the trajectory whose delta-derivative is the
/// forward jump, computed on the exact truncated grid the config produces.
double counterexample_terminal_value() {
  ScaleConfig scale_config;
  {
    ordered_json j;
    j["scale"] = counterexample_scale_json();
    scale_config = parse_config(j).scale;
  }
  const GridScale grid = make_grid_scale(scale_config);
  double value = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    value += grid.mu(k) * grid.sigma(k);
  }
  return value;
}

ordered_json counterexample_solve_config(const std::string& name) {
  ordered_json j;
  j["scale"] = counterexample_scale_json();
  ordered_json lagrangian;
  lagrangian["kind"] = "counterexample";
  j["lagrangian"] = std::move(lagrangian);
  ordered_json boundary;
  boundary["ua"] = std::vector<double>{0.0};
  boundary["ub"] = std::vector<double>{counterexample_terminal_value()};
  j["boundary"] = std::move(boundary);
  j["mode"] = "nabla-delta";
  ordered_json solver;
  solver["newton_tol"] = 1e-10;
  solver["max_iterations"] = 50;
  j["solver"] = std::move(solver);
  j["output"] = output_section(name);
  return j;
}

// -- the catalog ------------------------------------------------------------

ordered_json build_preset(const std::string& name) {
  // classification catalog -------------------------------------------------
  if (name == "ex2_1") {
    return classify_config(name, {interval_cell(0.0, 1.0)});
  }
  if (name == "ex2_2") {
    return classify_config(name, {points_cell({0.0, 0.5, 1.2, 3.0})});
  }
  if (name == "ex2_3") {
    return classify_config(name,
                           {points_cell({0.0, 1.0}), interval_cell(2.0, 3.0)});
  }
  if (name == "ex2_4") {
    return classify_config(name,
                           {interval_cell(-1.0, 0.0), power_cell("above", 1.0)});
  }
  if (name == "ex2_5") {
    return classify_config(name,
                           {interval_cell(0.0, 1.0), interval_cell(2.0, 3.0)});
  }
  if (name == "ex3_3") {
    return classify_config(name, {geometric_cell("above", 3.0)});
  }
  if (name == "ex3_4") {
    return classify_config(name, {geometric_cell("above", 2.0)});
  }
  if (name == "ex3_5") {
    return classify_config(name, {geometric_cell("below", 3.0)});
  }
  if (name == "ex3_6") {
    return classify_config(name, {geometric_cell("below", 2.0)});
  }
  if (name == "ex3_7") {
    return classify_config(name,
                           {interval_cell(-1.0, 0.0), power_cell("above", 1.0)});
  }
  if (name == "ex3_8") {
    return classify_config(name,
                           {interval_cell(-1.0, 0.0), power_cell("above", 2.0)});
  }
  if (name == "ex3_9") {
    return classify_config(name,
                           {power_cell("below", 1.0), power_cell("above", 3.0)});
  }
  if (name == "ex3_10") {
    return classify_config(name,
                           {power_cell("below", 1.0), power_cell("above", 2.0)});
  }
  if (name == "ex4_1") {
    return classify_config(name, {factorial_cell("above")});
  }
  if (name == "ex4_2") {
    return classify_config(
        name, {interval_cell(-1.0, 0.0), geometric_cell("above", 2.0)});
  }
  if (name == "ex4_3") {
    return classify_config(
        name, {geometric_cell("below", 2.0), geometric_cell("above", 2.0)});
  }

  // variational catalog ----------------------------------------------------
  if (name == "ex1_counterexample") {
    return counterexample_solve_config(name);
  }
  if (name == "ex1_translation") {
    ordered_json j = counterexample_solve_config(name);
    ordered_json transformation;
    transformation["kind"] = "translation";
    transformation["direction"] = std::vector<double>{1.0};
    transformation["eta"] = 0.5;
    transformation["theta_samples"] = 7;
    transformation["tolerance"] = 1e-10;
    j["transformation"] = std::move(transformation);
    return j;
  }
  if (name == "free_particle") {
    ordered_json j;
    j["scale"] = uniform_scale_json(0.0, 1.0, 33);
    ordered_json lagrangian;
    lagrangian["kind"] = "quadratic";
    lagrangian["mass"] = std::vector<std::vector<double>>{{1.0}};
    lagrangian["stiffness"] = std::vector<std::vector<double>>{{0.0}};
    j["lagrangian"] = std::move(lagrangian);
    ordered_json boundary;
    boundary["ua"] = std::vector<double>{0.0};
    boundary["ub"] = std::vector<double>{1.0};
    j["boundary"] = std::move(boundary);
    j["mode"] = "nabla-delta";
    j["output"] = output_section(name);
    return j;
  }
  if (name == "oscillator") {
    ordered_json j;
    j["scale"] = uniform_scale_json(0.0, 1.0, 101);
    ordered_json lagrangian;
    lagrangian["kind"] = "quadratic";
    lagrangian["mass"] = std::vector<std::vector<double>>{{1.0}};
    lagrangian["stiffness"] = std::vector<std::vector<double>>{{1.0}};
    j["lagrangian"] = std::move(lagrangian);
    ordered_json boundary;
    boundary["ua"] = std::vector<double>{0.0};
    boundary["ub"] = std::vector<double>{std::sin(1.0)};
    j["boundary"] = std::move(boundary);
    j["mode"] = "nabla-delta";
    ordered_json solver;
    solver["newton_tol"] = 1e-11;
    solver["max_iterations"] = 50;
    j["solver"] = std::move(solver);
    j["output"] = output_section(name);
    return j;
  }
  if (name == "oscillator_convergence") {
    ordered_json j;
    j["scale"] = uniform_scale_json(0.0, 1.0, 11);
    ordered_json solver;
    solver["newton_tol"] = 1e-10;
    solver["max_iterations"] = 50;
    j["solver"] = std::move(solver);
    ordered_json convergence;
    convergence["reference"] = "oscillator";
    convergence["sizes"] = std::vector<std::size_t>{11, 21, 41, 81, 161};
    convergence["compare_modes"] = true;
    j["convergence"] = std::move(convergence);
    j["output"] = output_section(name);
    return j;
  }
  if (name == "rotational_noether") {
    ordered_json j;
    j["scale"] = uniform_scale_json(0.0, 1.0, 201);
    ordered_json lagrangian;
    lagrangian["kind"] = "rotational";
    j["lagrangian"] = std::move(lagrangian);
    ordered_json boundary;
    boundary["ua"] = std::vector<double>{1.0, 0.3};
    boundary["ub"] = std::vector<double>{0.8, 1.1};
    j["boundary"] = std::move(boundary);
    j["mode"] = "nabla-delta";
    ordered_json solver;
    solver["newton_tol"] = 1e-10;
    solver["max_iterations"] = 50;
    j["solver"] = std::move(solver);
    ordered_json transformation;
    transformation["kind"] = "rotation";
    transformation["dimension"] = 2;
    transformation["plane"] = std::vector<int>{0, 1};
    transformation["eta"] = 1.0;
    transformation["theta_samples"] = 9;
    transformation["tolerance"] = 1e-12;
    j["transformation"] = std::move(transformation);
    j["output"] = output_section(name);
    return j;
  }

  throw ConfigError("unknown preset \"" + name +
                    "\"; run `tsvar presets list` for the catalog");
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"ex1_counterexample", "solve",
       "Counterexample Lagrangian on a factorial truncation; the critical "
       "trajectory is the delta-antiderivative of the forward jump."},
      {"ex1_translation", "noether",
       "Translation probe of the counterexample Lagrangian: not invariant, "
       "so the would-be conserved quantity drifts."},
      {"ex2_1", "classify",
       "Continuum [0, 1]: the forward jump is continuous everywhere."},
      {"ex2_2", "classify",
       "Four isolated points: everything is scattered, sigma continuous."},
      {"ex2_3", "classify",
       "Isolated pair next to a continuum block: continuous even at the "
       "left-scattered join."},
      {"ex2_4", "classify",
       "Continuum with a harmonic tail 1/k accumulating at its right "
       "endpoint: sigma continuous."},
      {"ex2_5", "classify",
       "Two continuum blocks: sigma jumps at the right-scattered, "
       "left-dense point 1."},
      {"ex3_3", "classify",
       "Geometric scale 3^-k above 0: sigma_nabla(0) = 3."},
      {"ex3_4", "classify",
       "Geometric scale 2^-k above 0: sigma_nabla(0) = 2."},
      {"ex3_5", "classify",
       "Geometric scale -3^-k below 0: sigma_nabla(0) = 1/3."},
      {"ex3_6", "classify",
       "Geometric scale -2^-k below 0: sigma_nabla(0) = 1/2."},
      {"ex3_7", "classify",
       "Continuum meeting a harmonic tail 1/k: sigma_nabla(0) = 1."},
      {"ex3_8", "classify",
       "Continuum meeting an inverse-square tail 1/k^2: sigma_nabla(0) = 1."},
      {"ex3_9", "classify",
       "Power tails on both sides (exponents 1 and 3): sigma_nabla(0) = 1."},
      {"ex3_10", "classify",
       "Power tails on both sides (exponents 1 and 2): sigma_nabla(0) = 1."},
      {"ex4_1", "classify",
       "Factorial scale 1/k!: the difference quotient diverges, so "
       "sigma_nabla(0) does not exist."},
      {"ex4_2", "classify",
       "Continuum against a geometric tail: the one-sided limits 1 and 2 "
       "disagree at 0."},
      {"ex4_3", "classify",
       "Geometric tails on both sides: the one-sided limits 1/2 and 2 "
       "disagree at 0."},
      {"free_particle", "solve",
       "Free particle on a uniform grid: the solver reproduces the straight "
       "line exactly."},
      {"oscillator", "solve",
       "Harmonic oscillator boundary problem on a uniform grid of 101 "
       "points."},
      {"oscillator_convergence", "convergence",
       "Grid-refinement study of the oscillator under both difference "
       "forms."},
      {"rotational_noether", "noether",
       "Rotationally invariant Lagrangian with a rotation family: the "
       "angular quantity is conserved along the solved trajectory."},
  };
  return catalog;
}

ordered_json preset_json(const std::string& name) {
  return build_preset(name);
}

ProblemConfig preset_config(const std::string& name) {
  return parse_config(build_preset(name));
}

}  // namespace tsvar
