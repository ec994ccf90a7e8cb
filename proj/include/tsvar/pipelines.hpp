#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "tsvar/config.hpp"

namespace tsvar {

/**
 * Everything a command produces, held in memory: the JSON summary, optional
 * CSV payloads, and the process exit code the command line should return
 * (0 success, 2 solver non-convergence).  Keeping artifacts in memory lets
 * tests assert on exact bytes without touching the filesystem.
 */
struct ArtifactBundle {
  int exit_code = 0;
  std::string summary_filename = "summary.json";
  nlohmann::ordered_json summary;
  std::optional<std::string> trajectory_csv;
  std::optional<std::string> convergence_csv;
};

/// Regularity survey of the configured scale: per notable point the
/// scatteredness class, the forward-jump continuity verdict, and the
/// backward-derivative verdict with value or failure reason; plus the
/// scale-wide flags.  Writes classification.json.
ArtifactBundle pipeline_classify(const ProblemConfig& config);

/// Solves the configured problem (boundary section -> two-point solve;
/// initial section -> forward integration) and reports the trajectory with
/// its difference quotients, all four residual-form norms, the fitted
/// constant of the integral form, a table of grid sigma-nabla values, and -
/// when a transformation family is configured - the conserved quantity and
/// its drift.  Writes trajectory.csv and summary.json.
ArtifactBundle pipeline_solve(const ProblemConfig& config);

/// pipeline_solve with a mandatory transformation family plus the full
/// invariance report in the summary.
ArtifactBundle pipeline_noether(const ProblemConfig& config);

/// Sweeps the configured grid sizes against a registered closed-form
/// reference solution (oscillator or free_particle), reporting max errors
/// and the fitted empirical order per mode.  Writes convergence.csv and
/// summary.json.
ArtifactBundle pipeline_convergence(const ProblemConfig& config);

/// Creates the directory if needed and writes every artifact in the bundle.
void write_artifacts(const ArtifactBundle& bundle,
                     const std::string& directory);

}  // namespace tsvar
