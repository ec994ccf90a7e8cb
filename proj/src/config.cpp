#include "tsvar/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace tsvar {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config error at " + (path.empty() ? "/" : path) + ": " +
                    message);
}

/// Tracks which keys of an object node were consumed; finish() rejects the
/// rest, which is how unknown keys anywhere in a document get reported with
/// their JSON path.
class Section {
 public:
  Section(const ordered_json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      fail(path_, "expected an object");
    }
  }

  const ordered_json& require(const char* key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it == node_.end()) {
      fail(path_, std::string("missing required key \"") + key + "\"");
    }
    return *it;
  }

  const ordered_json* optional(const char* key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (seen_.find(item.key()) == seen_.end()) {
        fail(path_, "unknown key \"" + item.key() + "\"");
      }
    }
  }

  [[nodiscard]] std::string child(const char* key) const {
    return path_ + "/" + key;
  }

 private:
  const ordered_json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_double(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) {
    fail(path, "expected a number");
  }
  return v.get<double>();
}

double as_positive(const ordered_json& v, const std::string& path) {
  const double x = as_double(v, path);
  if (!(x > 0.0)) {
    fail(path, "expected a positive number");
  }
  return x;
}

long long as_integer(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer()) {
    fail(path, "expected an integer");
  }
  return v.get<long long>();
}

std::size_t as_size(const ordered_json& v, const std::string& path) {
  const long long x = as_integer(v, path);
  if (x < 0) {
    fail(path, "expected a non-negative integer");
  }
  return static_cast<std::size_t>(x);
}

bool as_bool(const ordered_json& v, const std::string& path) {
  if (!v.is_boolean()) {
    fail(path, "expected a boolean");
  }
  return v.get<bool>();
}

std::string as_string(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) {
    fail(path, "expected a string");
  }
  return v.get<std::string>();
}

std::vector<double> as_double_list(const ordered_json& v,
                                   const std::string& path) {
  if (!v.is_array()) {
    fail(path, "expected an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_double(v[i], path + "/" + std::to_string(i)));
  }
  return out;
}

std::vector<int> as_exponent_list(const ordered_json& v,
                                  const std::string& path) {
  if (!v.is_array()) {
    fail(path, "expected an array of non-negative integers");
  }
  std::vector<int> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long long e = as_integer(v[i], path + "/" + std::to_string(i));
    if (e < 0) {
      fail(path + "/" + std::to_string(i), "expected a non-negative integer");
    }
    out.push_back(static_cast<int>(e));
  }
  return out;
}

Eigen::VectorXd as_vector(const ordered_json& v, const std::string& path) {
  const std::vector<double> raw = as_double_list(v, path);
  if (raw.empty()) {
    fail(path, "expected a non-empty array");
  }
  return Eigen::Map<const Eigen::VectorXd>(raw.data(),
                                           static_cast<Eigen::Index>(raw.size()));
}

Eigen::MatrixXd as_matrix(const ordered_json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    fail(path, "expected a non-empty array of rows");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back(as_double_list(v[i], path + "/" + std::to_string(i)));
    if (rows.back().size() != rows.front().size()) {
      fail(path, "rows have inconsistent lengths");
    }
  }
  if (rows.front().empty()) {
    fail(path, "rows must be non-empty");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    out.push_back(std::move(row));
  }
  return out;
}

// -- scale ------------------------------------------------------------------

bool is_sequence_kind(const std::string& kind) {
  return kind == "geometric" || kind == "power" || kind == "factorial";
}

CellConfig parse_cell(const ordered_json& node, const std::string& path) {
  Section s(node, path);
  CellConfig cell;
  cell.kind = as_string(s.require("kind"), s.child("kind"));
  if (cell.kind == "interval") {
    cell.lo = as_double(s.require("lo"), s.child("lo"));
    cell.hi = as_double(s.require("hi"), s.child("hi"));
    if (!(cell.lo < cell.hi)) {
      fail(path, "interval needs lo < hi");
    }
  } else if (cell.kind == "points") {
    cell.values = as_double_list(s.require("values"), s.child("values"));
    if (cell.values.empty()) {
      fail(s.child("values"), "expected at least one point");
    }
  } else if (is_sequence_kind(cell.kind)) {
    if (const auto* v = s.optional("side")) {
      cell.side = as_string(*v, s.child("side"));
      if (cell.side != "above" && cell.side != "below") {
        fail(s.child("side"), "expected \"above\" or \"below\"");
      }
    }
    cell.accumulation =
        as_double(s.require("accumulation"), s.child("accumulation"));
    if (cell.kind == "geometric") {
      cell.ratio = as_double(s.require("ratio"), s.child("ratio"));
      if (!(cell.ratio > 1.0)) {
        fail(s.child("ratio"), "expected a ratio > 1");
      }
    }
    if (cell.kind == "power") {
      cell.exponent = as_positive(s.require("exponent"), s.child("exponent"));
    }
    if (const auto* v = s.optional("amplitude")) {
      cell.amplitude = as_positive(*v, s.child("amplitude"));
    }
    if (const auto* v = s.optional("max_index")) {
      cell.max_index = as_size(*v, s.child("max_index"));
    }
  } else {
    fail(path, "unsupported cell kind \"" + cell.kind + "\"");
  }
  s.finish();
  return cell;
}

ScaleConfig parse_scale(const ordered_json& node, const std::string& path) {
  Section s(node, path);
  ScaleConfig scale;
  scale.kind = as_string(s.require("kind"), s.child("kind"));
  if (scale.kind == "uniform") {
    scale.a = as_double(s.require("a"), s.child("a"));
    scale.b = as_double(s.require("b"), s.child("b"));
    scale.n = as_size(s.require("n"), s.child("n"));
    if (!(scale.a < scale.b)) {
      fail(path, "uniform scale needs a < b");
    }
    if (scale.n < 3) {
      fail(s.child("n"), "expected at least 3 points");
    }
  } else if (scale.kind == "points") {
    scale.values = as_double_list(s.require("values"), s.child("values"));
    if (scale.values.size() < 3) {
      fail(s.child("values"), "expected at least 3 points");
    }
  } else if (scale.kind == "analytic") {
    const ordered_json& cells = s.require("cells");
    if (!cells.is_array() || cells.empty()) {
      fail(s.child("cells"), "expected a non-empty array of cells");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      scale.cells.push_back(
          parse_cell(cells[i], s.child("cells") + "/" + std::to_string(i)));
    }
    if (const auto* v = s.optional("budget")) {
      scale.budget = as_size(*v, s.child("budget"));
      if (scale.budget < 3) {
        fail(s.child("budget"), "expected a budget of at least 3");
      }
    }
    if (const auto* v = s.optional("interval_resolution")) {
      scale.interval_resolution = as_size(*v, s.child("interval_resolution"));
      if (scale.interval_resolution < 2) {
        fail(s.child("interval_resolution"), "expected at least 2");
      }
    }
  } else {
    fail(path, "unknown scale kind \"" + scale.kind +
                   "\" (expected uniform, points or analytic)");
  }
  s.finish();
  return scale;
}

ordered_json cell_json(const CellConfig& cell) {
  ordered_json j;
  j["kind"] = cell.kind;
  if (cell.kind == "interval") {
    j["lo"] = cell.lo;
    j["hi"] = cell.hi;
  } else if (cell.kind == "points") {
    j["values"] = cell.values;
  } else {
    j["side"] = cell.side;
    j["accumulation"] = cell.accumulation;
    if (cell.kind == "geometric") {
      j["ratio"] = cell.ratio;
    }
    if (cell.kind == "power") {
      j["exponent"] = cell.exponent;
    }
    j["amplitude"] = cell.amplitude;
    if (cell.max_index) {
      j["max_index"] = *cell.max_index;
    }
  }
  return j;
}

ordered_json scale_json(const ScaleConfig& scale) {
  ordered_json j;
  j["kind"] = scale.kind;
  if (scale.kind == "uniform") {
    j["a"] = scale.a;
    j["b"] = scale.b;
    j["n"] = scale.n;
  } else if (scale.kind == "points") {
    j["values"] = scale.values;
  } else {
    ordered_json cells = ordered_json::array();
    for (const CellConfig& cell : scale.cells) {
      cells.push_back(cell_json(cell));
    }
    j["cells"] = std::move(cells);
    j["budget"] = scale.budget;
    j["interval_resolution"] = scale.interval_resolution;
  }
  return j;
}

// -- lagrangian -------------------------------------------------------------

Monomial parse_monomial(const ordered_json& node, const std::string& path,
                        Eigen::Index dimension) {
  Section s(node, path);
  Monomial m;
  m.coeff = as_double(s.require("coeff"), s.child("coeff"));
  m.x_powers = as_exponent_list(s.require("x_powers"), s.child("x_powers"));
  m.v_powers = as_exponent_list(s.require("v_powers"), s.child("v_powers"));
  const long long t = as_integer(s.require("t_power"), s.child("t_power"));
  if (t < 0) {
    fail(s.child("t_power"), "expected a non-negative integer");
  }
  m.t_power = static_cast<int>(t);
  if (static_cast<Eigen::Index>(m.x_powers.size()) != dimension ||
      static_cast<Eigen::Index>(m.v_powers.size()) != dimension) {
    fail(path, "exponent lists must have one entry per state dimension");
  }
  s.finish();
  return m;
}

LagrangianConfig parse_lagrangian(const ordered_json& node,
                                  const std::string& path) {
  Section s(node, path);
  LagrangianConfig lag;
  lag.kind = as_string(s.require("kind"), s.child("kind"));
  if (lag.kind == "quadratic") {
    lag.mass = as_matrix(s.require("mass"), s.child("mass"));
    lag.stiffness = as_matrix(s.require("stiffness"), s.child("stiffness"));
    if (const auto* v = s.optional("load")) {
      lag.load = as_vector(*v, s.child("load"));
    } else {
      lag.load = Eigen::VectorXd::Zero(lag.mass.rows());
    }
    lag.dimension = lag.mass.rows();
  } else if (lag.kind == "counterexample") {
    lag.dimension = 1;
  } else if (lag.kind == "rotational") {
    lag.dimension = 2;
  } else if (lag.kind == "polynomial") {
    const long long dim = as_integer(s.require("dimension"),
                                     s.child("dimension"));
    if (dim < 1) {
      fail(s.child("dimension"), "expected a positive integer");
    }
    lag.dimension = static_cast<Eigen::Index>(dim);
    const ordered_json& terms = s.require("terms");
    if (!terms.is_array() || terms.empty()) {
      fail(s.child("terms"), "expected a non-empty array of terms");
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
      lag.terms.push_back(parse_monomial(
          terms[i], s.child("terms") + "/" + std::to_string(i), lag.dimension));
    }
  } else {
    fail(path, "unknown lagrangian kind \"" + lag.kind +
                   "\" (expected quadratic, counterexample, rotational or "
                   "polynomial)");
  }
  s.finish();
  return lag;
}

ordered_json lagrangian_json(const LagrangianConfig& lag) {
  ordered_json j;
  j["kind"] = lag.kind;
  if (lag.kind == "quadratic") {
    j["mass"] = matrix_json(lag.mass);
    j["stiffness"] = matrix_json(lag.stiffness);
    j["load"] = vector_json(lag.load);
  } else if (lag.kind == "polynomial") {
    j["dimension"] = lag.dimension;
    ordered_json terms = ordered_json::array();
    for (const Monomial& m : lag.terms) {
      ordered_json term;
      term["coeff"] = m.coeff;
      term["x_powers"] = m.x_powers;
      term["v_powers"] = m.v_powers;
      term["t_power"] = m.t_power;
      terms.push_back(std::move(term));
    }
    j["terms"] = std::move(terms);
  }
  return j;
}

// -- remaining sections -----------------------------------------------------

BoundaryConfig parse_boundary(const ordered_json& node,
                              const std::string& path) {
  Section s(node, path);
  BoundaryConfig b;
  b.ua = as_vector(s.require("ua"), s.child("ua"));
  b.ub = as_vector(s.require("ub"), s.child("ub"));
  if (b.ua.size() != b.ub.size()) {
    fail(path, "ua and ub must have the same dimension");
  }
  s.finish();
  return b;
}

InitialConfig parse_initial(const ordered_json& node, const std::string& path) {
  Section s(node, path);
  InitialConfig init;
  init.u0 = as_vector(s.require("u0"), s.child("u0"));
  init.u1 = as_vector(s.require("u1"), s.child("u1"));
  if (init.u0.size() != init.u1.size()) {
    fail(path, "u0 and u1 must have the same dimension");
  }
  s.finish();
  return init;
}

SolverConfig parse_solver(const ordered_json& node, const std::string& path) {
  Section s(node, path);
  SolverConfig solver;
  if (const auto* v = s.optional("newton_tol")) {
    solver.newton_tol = as_positive(*v, s.child("newton_tol"));
  }
  if (const auto* v = s.optional("max_iterations")) {
    const long long iters = as_integer(*v, s.child("max_iterations"));
    if (iters < 1) {
      fail(s.child("max_iterations"), "expected a positive integer");
    }
    solver.max_iterations = static_cast<int>(iters);
  }
  s.finish();
  return solver;
}

TransformationConfig parse_transformation(const ordered_json& node,
                                          const std::string& path) {
  Section s(node, path);
  TransformationConfig t;
  t.kind = as_string(s.require("kind"), s.child("kind"));
  if (t.kind == "translation") {
    t.direction = as_vector(s.require("direction"), s.child("direction"));
    t.dimension = t.direction.size();
  } else if (t.kind == "rotation") {
    const long long dim = as_integer(s.require("dimension"),
                                     s.child("dimension"));
    if (dim < 2) {
      fail(s.child("dimension"), "expected a dimension of at least 2");
    }
    t.dimension = static_cast<Eigen::Index>(dim);
    const ordered_json& plane = s.require("plane");
    if (!plane.is_array() || plane.size() != 2) {
      fail(s.child("plane"), "expected an array of two axis indices");
    }
    t.plane_i =
        static_cast<Eigen::Index>(as_size(plane[0], s.child("plane") + "/0"));
    t.plane_j =
        static_cast<Eigen::Index>(as_size(plane[1], s.child("plane") + "/1"));
  } else if (t.kind == "linear_flow") {
    t.generator = as_matrix(s.require("generator"), s.child("generator"));
    if (t.generator.rows() != t.generator.cols()) {
      fail(s.child("generator"), "expected a square matrix");
    }
    t.dimension = t.generator.rows();
  } else {
    fail(path, "unknown transformation kind \"" + t.kind +
                   "\" (expected translation, rotation or linear_flow)");
  }
  if (const auto* v = s.optional("eta")) {
    t.eta = as_positive(*v, s.child("eta"));
  }
  if (const auto* v = s.optional("theta_samples")) {
    const long long samples = as_integer(*v, s.child("theta_samples"));
    if (samples < 5) {
      fail(s.child("theta_samples"), "expected at least 5 theta samples");
    }
    t.theta_samples = static_cast<int>(samples);
  }
  if (const auto* v = s.optional("tolerance")) {
    t.tolerance = as_positive(*v, s.child("tolerance"));
  }
  s.finish();
  return t;
}

ordered_json transformation_json(const TransformationConfig& t) {
  ordered_json j;
  j["kind"] = t.kind;
  if (t.kind == "translation") {
    j["direction"] = vector_json(t.direction);
  } else if (t.kind == "rotation") {
    j["dimension"] = t.dimension;
    j["plane"] = {t.plane_i, t.plane_j};
  } else {
    j["generator"] = matrix_json(t.generator);
  }
  j["eta"] = t.eta;
  j["theta_samples"] = t.theta_samples;
  j["tolerance"] = t.tolerance;
  return j;
}

ConvergenceConfig parse_convergence(const ordered_json& node,
                                    const std::string& path) {
  Section s(node, path);
  ConvergenceConfig c;
  c.reference = as_string(s.require("reference"), s.child("reference"));
  const ordered_json& sizes = s.require("sizes");
  if (!sizes.is_array() || sizes.size() < 2) {
    fail(s.child("sizes"), "expected an array of at least two grid sizes");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t n = as_size(sizes[i], s.child("sizes") + "/" +
                                                std::to_string(i));
    if (n < 3) {
      fail(s.child("sizes") + "/" + std::to_string(i),
           "expected at least 3 points");
    }
    c.sizes.push_back(n);
  }
  if (const auto* v = s.optional("compare_modes")) {
    c.compare_modes = as_bool(*v, s.child("compare_modes"));
  }
  s.finish();
  return c;
}

std::string parse_output(const ordered_json& node, const std::string& path) {
  Section s(node, path);
  const std::string dir = as_string(s.require("directory"),
                                    s.child("directory"));
  if (dir.empty()) {
    fail(s.child("directory"), "expected a non-empty path");
  }
  s.finish();
  return dir;
}

}  // namespace

ProblemConfig parse_config(const ordered_json& document) {
  Section s(document, "");
  ProblemConfig config;
  config.scale = parse_scale(s.require("scale"), "/scale");
  if (const auto* v = s.optional("lagrangian")) {
    config.lagrangian = parse_lagrangian(*v, "/lagrangian");
  }
  if (const auto* v = s.optional("boundary")) {
    config.boundary = parse_boundary(*v, "/boundary");
  }
  if (const auto* v = s.optional("initial")) {
    config.initial = parse_initial(*v, "/initial");
  }
  if (const auto* v = s.optional("mode")) {
    config.mode = parse_mode(as_string(*v, "/mode"));
  }
  if (const auto* v = s.optional("solver")) {
    config.solver = parse_solver(*v, "/solver");
  }
  if (const auto* v = s.optional("transformation")) {
    config.transformation = parse_transformation(*v, "/transformation");
  }
  if (const auto* v = s.optional("convergence")) {
    config.convergence = parse_convergence(*v, "/convergence");
  }
  if (const auto* v = s.optional("output")) {
    config.output_directory = parse_output(*v, "/output");
  }
  s.finish();

  if (config.boundary && config.initial) {
    fail("", "give either a boundary section or an initial section, not both");
  }
  return config;
}

ProblemConfig parse_config_text(const std::string& text) {
  ordered_json document;
  try {
    document = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw ConfigError(std::string("config parse error: ") + error.what());
  }
  return parse_config(document);
}

ProblemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

nlohmann::ordered_json to_json(const ProblemConfig& config) {
  ordered_json j;
  j["scale"] = scale_json(config.scale);
  if (config.lagrangian) {
    j["lagrangian"] = lagrangian_json(*config.lagrangian);
  }
  if (config.boundary) {
    ordered_json b;
    b["ua"] = vector_json(config.boundary->ua);
    b["ub"] = vector_json(config.boundary->ub);
    j["boundary"] = std::move(b);
  }
  if (config.initial) {
    ordered_json init;
    init["u0"] = vector_json(config.initial->u0);
    init["u1"] = vector_json(config.initial->u1);
    j["initial"] = std::move(init);
  }
  j["mode"] = mode_token(config.mode);
  ordered_json solver;
  solver["newton_tol"] = config.solver.newton_tol;
  solver["max_iterations"] = config.solver.max_iterations;
  j["solver"] = std::move(solver);
  if (config.transformation) {
    j["transformation"] = transformation_json(*config.transformation);
  }
  if (config.convergence) {
    ordered_json c;
    c["reference"] = config.convergence->reference;
    c["sizes"] = config.convergence->sizes;
    c["compare_modes"] = config.convergence->compare_modes;
    j["convergence"] = std::move(c);
  }
  ordered_json output;
  output["directory"] = config.output_directory;
  j["output"] = std::move(output);
  return j;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace {

ScaleCell make_cell(const CellConfig& cell) {
  if (cell.kind == "interval") {
    return IntervalCell{cell.lo, cell.hi};
  }
  if (cell.kind == "points") {
    return PointListCell{cell.values};
  }
  SequenceCell seq;
  if (cell.kind == "geometric") {
    seq.kind = SequenceKind::geometric;
    seq.ratio = cell.ratio;
  } else if (cell.kind == "power") {
    seq.kind = SequenceKind::power;
    seq.exponent = cell.exponent;
  } else {
    seq.kind = SequenceKind::factorial;
  }
  seq.side = cell.side == "above" ? SequenceSide::above : SequenceSide::below;
  seq.accumulation = cell.accumulation;
  seq.amplitude = cell.amplitude;
  seq.max_index = cell.max_index;
  return seq;
}

std::vector<double> uniform_points(double a, double b, std::size_t n) {
  const GridScale grid = GridScale::uniform(a, b, n);
  std::vector<double> points(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    points[k] = grid[k];
  }
  return points;
}

}  // namespace

AnalyticScale make_analytic_scale(const ScaleConfig& config) {
  if (config.kind == "uniform") {
    return AnalyticScale::from_cells(
        {PointListCell{uniform_points(config.a, config.b, config.n)}});
  }
  if (config.kind == "points") {
    return AnalyticScale::from_cells({PointListCell{config.values}});
  }
  std::vector<ScaleCell> cells;
  cells.reserve(config.cells.size());
  for (const CellConfig& cell : config.cells) {
    cells.push_back(make_cell(cell));
  }
  return AnalyticScale::from_cells(std::move(cells));
}

GridScale make_grid_scale(const ScaleConfig& config) {
  if (config.kind == "uniform") {
    return GridScale::uniform(config.a, config.b, config.n);
  }
  if (config.kind == "points") {
    return GridScale::from_points(config.values);
  }
  return truncate_to_grid(make_analytic_scale(config), config.budget,
                          config.interval_resolution)
      .grid;
}

Lagrangian make_lagrangian(const LagrangianConfig& config) {
  if (config.kind == "quadratic") {
    return Lagrangian::quadratic(config.mass, config.stiffness, config.load);
  }
  if (config.kind == "counterexample") {
    return Lagrangian::counterexample();
  }
  if (config.kind == "rotational") {
    return Lagrangian::rotational();
  }
  return Lagrangian::polynomial(config.dimension, config.terms);
}

TransformationFamily make_transformation(const TransformationConfig& config) {
  if (config.kind == "translation") {
    return TransformationFamily::translation(config.direction, config.eta);
  }
  if (config.kind == "rotation") {
    return TransformationFamily::rotation(config.dimension, config.plane_i,
                                          config.plane_j, config.eta);
  }
  return TransformationFamily::linear_flow(config.generator, config.eta);
}

SolveOptions make_solve_options(const SolverConfig& config) {
  SolveOptions options;
  options.newton_tol = config.newton_tol;
  options.max_iterations = config.max_iterations;
  return options;
}

ELMode parse_mode(const std::string& token) {
  if (token == "nabla-delta") {
    return ELMode::nonshifted_nabla_delta;
  }
  if (token == "delta-delta") {
    return ELMode::shifted_delta_delta;
  }
  if (token == "delta-nabla") {
    return ELMode::nonshifted_delta_nabla;
  }
  throw ConfigError("unknown mode \"" + token +
                    "\" (expected nabla-delta, delta-delta or delta-nabla)");
}

std::string mode_token(ELMode mode) {
  switch (mode) {
    case ELMode::nonshifted_nabla_delta:
      return "nabla-delta";
    case ELMode::shifted_delta_delta:
      return "delta-delta";
    case ELMode::nonshifted_delta_nabla:
      return "delta-nabla";
  }
  return "nabla-delta";
}

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace tsvar
