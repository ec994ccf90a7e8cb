#include "tsvar/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tsvar/calculus.hpp"
#include "tsvar/euler_lagrange.hpp"
#include "tsvar/noether.hpp"
#include "tsvar/regularity.hpp"
#include "tsvar/solver.hpp"

namespace tsvar {
namespace {

using nlohmann::ordered_json;

ordered_json ratio_json(const RatioLimit& ratio) {
  ordered_json j;
  j["status"] = std::string(to_label(ratio.status));
  j["value"] = ratio.value;
  if (ratio.divergence_rate) {
    j["divergence_rate"] = *ratio.divergence_rate;
  }
  return j;
}

std::string reason_phrase(RegularityReason reason) {
  switch (reason) {
    case RegularityReason::rs_ld_discontinuity:
      return "sigma is discontinuous there";
    case RegularityReason::ratio_diverges:
      return "ratio diverges";
    case RegularityReason::ratio_undetermined:
      return "ratio limit undetermined";
    case RegularityReason::left_right_mismatch:
      return "one-sided limits disagree";
    default:
      return std::string(to_label(reason));
  }
}

// -- solve ------------------------------------------------------------------

std::string build_trajectory_csv(const GridScale& grid, const GridFunction& u,
                                 const GridFunction& du,
                                 const std::vector<const ELResidualReport*>&
                                     residuals,
                                 const GridFunction* constant) {
  const Eigen::Index dim = u.dimension();
  std::string csv = "t";
  for (Eigen::Index c = 0; c < dim; ++c) {
    csv += ",u" + std::to_string(c);
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    csv += ",du" + std::to_string(c);
  }
  csv += ",res_integral,res_nabla_delta,res_delta_delta,res_delta_nabla";
  if (constant != nullptr) {
    csv += ",noether";
  }
  csv += '\n';

  for (std::size_t k = 0; k < grid.size(); ++k) {
    csv += format_double(grid[k]);
    const Eigen::VectorXd state = u.value(k);
    for (Eigen::Index c = 0; c < dim; ++c) {
      csv += ',' + format_double(state(c));
    }
    if (du.covers(k)) {
      const Eigen::VectorXd quotient = du.value(k);
      for (Eigen::Index c = 0; c < dim; ++c) {
        csv += ',' + format_double(quotient(c));
      }
    } else {
      csv.append(static_cast<std::size_t>(dim), ',');
    }
    for (const ELResidualReport* report : residuals) {
      csv += ',';
      if (report->residuals.covers(k)) {
        csv += format_double(report->residuals.value(k).norm());
      }
    }
    if (constant != nullptr) {
      csv += ',';
      if (constant->covers(k)) {
        csv += format_double(constant->scalar(k));
      }
    }
    csv += '\n';
  }
  return csv;
}

ArtifactBundle run_solve(const ProblemConfig& config, bool noether_verb) {
  if (!config.lagrangian) {
    throw ConfigError(
        "config error at /lagrangian: solving requires a lagrangian section");
  }
  if (noether_verb && !config.transformation) {
    throw ConfigError(
        "config error at /transformation: the noether command requires a "
        "transformation section");
  }
  if (config.transformation && config.mode == ELMode::shifted_delta_delta) {
    throw ConfigError(
        "config error at /mode: the conserved quantity is defined for the "
        "non-shifted modes; use nabla-delta or delta-nabla");
  }

  const Lagrangian lagrangian = make_lagrangian(*config.lagrangian);
  const GridScale grid = make_grid_scale(config.scale);
  const SolveOptions options = make_solve_options(config.solver);

  std::optional<SolveReport> solved;
  if (config.boundary) {
    solved.emplace(solve_bvp(BVProblem{lagrangian, grid, config.boundary->ua,
                                       config.boundary->ub, config.mode},
                             options));
  } else if (config.initial) {
    if (config.mode != ELMode::nonshifted_nabla_delta) {
      throw ConfigError(
          "config error at /initial: forward integration drives the "
          "nabla-delta system; set mode to nabla-delta");
    }
    solved.emplace(integrate(lagrangian, grid, config.initial->u0,
                             config.initial->u1, options));
  } else {
    throw ConfigError(
        "config error at /boundary: solving requires a boundary or an "
        "initial section");
  }

  const GridFunction& trajectory = solved->trajectory;
  const GridFunction du = delta_derivative(trajectory);
  const ELResidualReport integral =
      residual_integral_delta(lagrangian, trajectory);
  const ELResidualReport nabla_delta =
      residual_diff_nabla_delta(lagrangian, trajectory);
  const ELResidualReport delta_delta =
      residual_diff_delta_delta_shifted(lagrangian, trajectory);
  const ELResidualReport delta_nabla =
      residual_diff_delta_nabla(lagrangian, trajectory);

  ArtifactBundle bundle;
  bundle.exit_code = solved->converged ? 0 : 2;
  ordered_json& j = bundle.summary;
  j["mode"] = mode_token(config.mode);
  {
    ordered_json scale;
    scale["a"] = grid.a();
    scale["b"] = grid.b();
    scale["n"] = grid.size();
    j["scale"] = std::move(scale);
  }
  {
    ordered_json convergence;
    convergence["converged"] = solved->converged;
    convergence["iterations"] = solved->iterations;
    convergence["final_residual_norm"] = solved->final_residual_norm;
    convergence["jacobian_condition_estimate"] =
        solved->jacobian_condition_estimate;
    j["convergence"] = std::move(convergence);
  }
  {
    ordered_json residuals;
    ordered_json integral_json;
    integral_json["max_norm"] = integral.max_norm;
    ordered_json fitted = ordered_json::array();
    if (integral.fitted_constant) {
      for (Eigen::Index i = 0; i < integral.fitted_constant->size(); ++i) {
        fitted.push_back((*integral.fitted_constant)(i));
      }
    }
    integral_json["fitted_constant"] = std::move(fitted);
    residuals["integral_delta"] = std::move(integral_json);
    ordered_json nd;
    nd["max_norm"] = nabla_delta.max_norm;
    residuals["nabla_delta"] = std::move(nd);
    ordered_json dd;
    dd["max_norm"] = delta_delta.max_norm;
    residuals["delta_delta_shifted"] = std::move(dd);
    ordered_json dn;
    dn["max_norm"] = delta_nabla.max_norm;
    residuals["delta_nabla"] = std::move(dn);
    j["residuals"] = std::move(residuals);
  }
  {
    // Grid values of the jump-operator derivative mu/nu; they stay bounded
    // exactly when the differential form carries the same content as the
    // integral form.
    ordered_json table = ordered_json::array();
    for (std::size_t k = 1; k < grid.size(); ++k) {
      ordered_json row;
      row["index"] = k;
      row["t"] = grid[k];
      row["value"] = grid.sigma_nabla(k);
      table.push_back(std::move(row));
    }
    j["sigma_nabla"] = std::move(table);
  }

  std::optional<GridFunction> constant;
  if (config.transformation) {
    const TransformationFamily family =
        make_transformation(*config.transformation);
    ordered_json noether;
    if (noether_verb) {
      const InvarianceReport invariance = check_invariance(
          lagrangian, family, trajectory, config.transformation->theta_samples,
          config.transformation->tolerance);
      ordered_json inv;
      inv["invariant"] = invariance.invariant;
      inv["max_theta_variation"] = invariance.max_theta_variation;
      inv["probed_thetas"] = invariance.probed_thetas;
      noether["invariance"] = std::move(inv);
    }
    const bool nabla_variant = config.mode == ELMode::nonshifted_delta_nabla;
    constant.emplace(nabla_variant
                         ? noether_constant_nabla(lagrangian, family,
                                                  trajectory)
                         : noether_constant(lagrangian, family, trajectory));
    const DriftReport report = drift(*constant);
    noether["variant"] = nabla_variant ? "nabla" : "delta";
    noether["constant_mean"] = constant->values().col(0).mean();
    ordered_json drift_json;
    drift_json["max_abs_deviation_from_mean"] =
        report.max_abs_deviation_from_mean;
    drift_json["linear_slope"] = report.linear_slope;
    noether["drift"] = std::move(drift_json);
    j["noether"] = std::move(noether);
  }

  bundle.trajectory_csv = build_trajectory_csv(
      grid, trajectory, du,
      {&integral, &nabla_delta, &delta_delta, &delta_nabla},
      constant ? &*constant : nullptr);
  return bundle;
}

// -- convergence ------------------------------------------------------------

std::optional<double> fitted_order(const std::vector<double>& hs,
                                   const std::vector<double>& errors) {
  for (double e : errors) {
    if (!(e > 0.0)) {
      return std::nullopt;
    }
  }
  const std::size_t m = hs.size();
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x_mean += std::log(hs[i]);
    y_mean += std::log(errors[i]);
  }
  x_mean /= static_cast<double>(m);
  y_mean /= static_cast<double>(m);
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(hs[i]) - x_mean;
    numerator += dx * (std::log(errors[i]) - y_mean);
    denominator += dx * dx;
  }
  return numerator / denominator;
}

}  // namespace

ArtifactBundle pipeline_classify(const ProblemConfig& config) {
  const AnalyticScale scale = make_analytic_scale(config.scale);
  const RegularitySurvey survey = survey_regularity(scale);

  ordered_json points = ordered_json::array();
  for (double t : scale.notable_points()) {
    ordered_json entry;
    entry["t"] = t;
    entry["class"] = classify_point(scale, t).label();

    const RegularityVerdict continuity = sigma_continuous_at(scale, t);
    entry["sigma_continuous"] = continuity.continuous_at;
    entry["continuity_verdict"] =
        std::string(continuity.continuous_at ? "sigma continuous at "
                                             : "sigma not continuous at ") +
        format_double(t);

    ordered_json nabla;
    try {
      const RegularityVerdict verdict = sigma_nabla_at(scale, t);
      nabla["differentiable"] = verdict.nabla_differentiable_at;
      nabla["reason"] = std::string(to_label(verdict.reason));
      if (verdict.sigma_nabla_value) {
        nabla["value"] = *verdict.sigma_nabla_value;
        nabla["verdict"] = "sigma_nabla(" + format_double(t) +
                           ") = " + format_double(*verdict.sigma_nabla_value);
      } else {
        nabla["verdict"] = "sigma_nabla(" + format_double(t) +
                           ") does not exist: " + reason_phrase(verdict.reason);
      }
      if (verdict.left_ratio) {
        nabla["left_ratio"] = ratio_json(*verdict.left_ratio);
      }
      if (verdict.right_ratio) {
        nabla["right_ratio"] = ratio_json(*verdict.right_ratio);
      }
    } catch (const std::domain_error&) {
      nabla["differentiable"] = false;
      nabla["reason"] = "outside_domain";
      nabla["verdict"] = "sigma_nabla(" + format_double(t) +
                         ") not defined: the scale minimum is right-scattered";
    }
    entry["sigma_nabla"] = std::move(nabla);
    points.push_back(std::move(entry));
  }

  ArtifactBundle bundle;
  bundle.summary_filename = "classification.json";
  ordered_json& j = bundle.summary;
  {
    ordered_json scale_json;
    scale_json["kind"] = config.scale.kind;
    scale_json["a"] = scale.a();
    scale_json["b"] = scale.b();
    scale_json["cells"] = scale.cells().size();
    j["scale"] = std::move(scale_json);
  }
  j["sigma_continuous_everywhere"] = survey.sigma_continuous;
  j["quasi_regular"] = survey.quasi_regular;
  j["sigma_discontinuities"] = survey.sigma_discontinuities;
  j["rho_discontinuities"] = survey.rho_discontinuities;
  j["points"] = std::move(points);
  return bundle;
}

ArtifactBundle pipeline_solve(const ProblemConfig& config) {
  return run_solve(config, false);
}

ArtifactBundle pipeline_noether(const ProblemConfig& config) {
  return run_solve(config, true);
}

ArtifactBundle pipeline_convergence(const ProblemConfig& config) {
  if (!config.convergence) {
    throw ConfigError(
        "config error at /convergence: the convergence command requires a "
        "convergence section");
  }
  const ConvergenceConfig& study = *config.convergence;

  std::optional<Lagrangian> lagrangian;
  std::function<double(double)> exact;
  Eigen::VectorXd ua(1);
  Eigen::VectorXd ub(1);
  if (study.reference == "oscillator") {
    lagrangian.emplace(Lagrangian::quadratic(Eigen::MatrixXd::Identity(1, 1),
                                             Eigen::MatrixXd::Identity(1, 1),
                                             Eigen::VectorXd::Zero(1)));
    ua << 0.0;
    ub << std::sin(1.0);
    exact = [](double t) { return std::sin(t); };
  } else if (study.reference == "free_particle") {
    lagrangian.emplace(Lagrangian::quadratic(Eigen::MatrixXd::Identity(1, 1),
                                             Eigen::MatrixXd::Zero(1, 1),
                                             Eigen::VectorXd::Zero(1)));
    ua << 0.0;
    ub << 1.0;
    exact = [](double t) { return t; };
  } else {
    throw ConfigError(
        "config error at /convergence/reference: no closed-form reference "
        "registered for \"" +
        study.reference + "\" (expected oscillator or free_particle)");
  }

  std::vector<ELMode> modes;
  if (study.compare_modes) {
    modes = {ELMode::nonshifted_nabla_delta, ELMode::shifted_delta_delta};
  } else {
    modes = {config.mode};
  }

  const SolveOptions options = make_solve_options(config.solver);
  std::string csv = "mode,n,h,max_error\n";
  ordered_json orders;
  ordered_json max_errors;
  ordered_json mode_tokens = ordered_json::array();
  bool all_converged = true;

  for (ELMode mode : modes) {
    const std::string token = mode_token(mode);
    mode_tokens.push_back(token);
    std::vector<double> hs;
    std::vector<double> errors;
    ordered_json error_list = ordered_json::array();
    for (std::size_t n : study.sizes) {
      const GridScale grid = GridScale::uniform(0.0, 1.0, n);
      const SolveReport report = solve_bvp(
          BVProblem{*lagrangian, grid, ua, ub, mode}, options);
      all_converged = all_converged && report.converged;
      double error = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        error = std::max(error,
                         std::abs(report.trajectory.scalar(k) - exact(grid[k])));
      }
      const double h = 1.0 / static_cast<double>(n - 1);
      csv += token + ',' + std::to_string(n) + ',' + format_double(h) + ',' +
             format_double(error) + '\n';
      hs.push_back(h);
      errors.push_back(error);
      error_list.push_back(error);
    }
    const std::optional<double> order = fitted_order(hs, errors);
    if (order) {
      orders[token] = *order;
    } else {
      orders[token] = nullptr;
    }
    max_errors[token] = std::move(error_list);
  }

  ArtifactBundle bundle;
  bundle.exit_code = all_converged ? 0 : 2;
  ordered_json& j = bundle.summary;
  j["reference"] = study.reference;
  j["sizes"] = study.sizes;
  j["modes"] = std::move(mode_tokens);
  j["orders"] = std::move(orders);
  j["max_errors"] = std::move(max_errors);
  j["converged"] = all_converged;
  bundle.convergence_csv = std::move(csv);
  return bundle;
}

void write_artifacts(const ArtifactBundle& bundle,
                     const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const auto write = [&](const std::string& filename,
                         const std::string& content) {
    const fs::path path = fs::path(directory) / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
  };
  write(bundle.summary_filename, bundle.summary.dump(2) + "\n");
  if (bundle.trajectory_csv) {
    write("trajectory.csv", *bundle.trajectory_csv);
  }
  if (bundle.convergence_csv) {
    write("convergence.csv", *bundle.convergence_csv);
  }
}

}  // namespace tsvar
