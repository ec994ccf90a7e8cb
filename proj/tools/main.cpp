#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tsvar/config.hpp"
#include "tsvar/pipelines.hpp"
#include "tsvar/presets.hpp"
#include "tsvar/solver.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::string mode;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "Path of a JSON problem file");
  cmd->add_option("--preset", flags.preset_name,
                  "Name of a built-in preset (see `tsvar presets list`)");
  cmd->add_option("--out", flags.out_dir,
                  "Output directory; overrides the config");
  cmd->add_option("--mode", flags.mode,
                  "Euler-Lagrange form: nabla-delta, delta-delta or "
                  "delta-nabla");
}

tsvar::ProblemConfig resolve_config(const CommonFlags& flags) {
  if (flags.config_path.empty() == flags.preset_name.empty()) {
    throw tsvar::ConfigError(
        "config error: give exactly one of --config or --preset");
  }
  tsvar::ProblemConfig config =
      flags.preset_name.empty() ? tsvar::load_config_file(flags.config_path)
                                : tsvar::preset_config(flags.preset_name);
  if (!flags.mode.empty()) {
    config.mode = tsvar::parse_mode(flags.mode);
  }
  if (!flags.out_dir.empty()) {
    config.output_directory = flags.out_dir;
  }
  return config;
}

void print_outcome(const std::string& command,
                   const tsvar::ArtifactBundle& bundle,
                   const std::string& directory) {
  const nlohmann::ordered_json& j = bundle.summary;
  if (command == "classify") {
    std::cout << "classified " << j["points"].size()
              << " notable points; sigma continuous everywhere: "
              << (j["sigma_continuous_everywhere"].get<bool>() ? "yes" : "no")
              << '\n';
  } else if (command == "convergence") {
    std::cout << "refinement study against " << j["reference"].get<std::string>()
              << "; fitted orders:";
    for (const auto& [token, order] : j["orders"].items()) {
      std::cout << ' ' << token << '=';
      if (order.is_null()) {
        std::cout << "exact";
      } else {
        std::cout << order.get<double>();
      }
    }
    std::cout << '\n';
  } else {
    const nlohmann::ordered_json& convergence = j["convergence"];
    if (convergence["converged"].get<bool>()) {
      std::cout << "converged in " << convergence["iterations"].get<int>()
                << " iteration(s); final residual "
                << convergence["final_residual_norm"].get<double>() << '\n';
    } else {
      std::cout << "did not converge; final residual "
                << convergence["final_residual_norm"].get<double>() << " after "
                << convergence["iterations"].get<int>() << " iteration(s)\n";
    }
    if (j.contains("noether")) {
      const nlohmann::ordered_json& noether = j["noether"];
      if (noether.contains("invariance")) {
        std::cout << "invariant under the family: "
                  << (noether["invariance"]["invariant"].get<bool>() ? "yes"
                                                                     : "no")
                  << '\n';
      }
      std::cout << "conserved-quantity drift: "
                << noether["drift"]["max_abs_deviation_from_mean"].get<double>()
                << '\n';
    }
  }
  std::cout << "artifacts in " << directory << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calculus of variations on bounded time scales"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* classify =
      app.add_subcommand("classify", "Survey the regularity of a scale");
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve a variational problem and report all residual forms");
  CLI::App* noether = app.add_subcommand(
      "noether", "Certify invariance and track the conserved quantity");
  CLI::App* convergence = app.add_subcommand(
      "convergence", "Grid-refinement study against a closed-form reference");
  for (CLI::App* cmd : {classify, solve, noether, convergence}) {
    add_common_flags(cmd, flags);
  }
  CLI::App* presets =
      app.add_subcommand("presets", "Inspect the built-in problem catalog");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "Print the catalog, one preset per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (presets->parsed()) {
      for (const tsvar::PresetInfo& info : tsvar::preset_catalog()) {
        std::printf("%-24s %-12s %s\n", info.name.c_str(),
                    info.command.c_str(), info.description.c_str());
      }
      return 0;
    }

    const tsvar::ProblemConfig config = resolve_config(flags);
    tsvar::ArtifactBundle bundle = [&] {
      if (classify->parsed()) return tsvar::pipeline_classify(config);
      if (solve->parsed()) return tsvar::pipeline_solve(config);
      if (noether->parsed()) return tsvar::pipeline_noether(config);
      return tsvar::pipeline_convergence(config);
    }();
    tsvar::write_artifacts(bundle, config.output_directory);

    const std::string command = classify->parsed()     ? "classify"
                                : solve->parsed()      ? "solve"
                                : noether->parsed()    ? "noether"
                                                       : "convergence";
    print_outcome(command, bundle, config.output_directory);
    return bundle.exit_code;
  } catch (const tsvar::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const tsvar::SingularJacobianError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const tsvar::StepFailure& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const tsvar::IntegrationFailure& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
