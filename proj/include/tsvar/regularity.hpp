#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tsvar/analytic_scale.hpp"
#include "tsvar/grid_scale.hpp"

namespace tsvar {

// ---------------------------------------------------------------------------
// Ratio limits of accumulation families
// ---------------------------------------------------------------------------

enum class RatioStatus { converged, diverged, undetermined };

[[nodiscard]] std::string_view to_label(RatioStatus s);

/**
 * The one-sided limit of the forward-jump difference quotient along a
 * sequence cell approaching its accumulation point.  For terms at scaled
 * distances w_k the quotient is w_{k-1}/w_k when the family sits above its
 * accumulation point and w_{k+1}/w_k when it sits below.
 */
struct RatioLimit {
  RatioStatus status = RatioStatus::undetermined;
  /// The limit when converged; the last probed quotient otherwise.
  double value = 0.0;
  /// For diverged families: log2 growth of the quotient per index doubling.
  std::optional<double> divergence_rate;

  [[nodiscard]] bool converged() const noexcept {
    return status == RatioStatus::converged;
  }
};

/**
 * Evaluates the difference-quotient limit of a sequence cell at its
 * accumulation point.  Analytic kinds are answered in closed form:
 *
 *   geometric  above -> ratio        below -> 1/ratio
 *   power      above -> 1            below -> 1
 *   factorial  above -> diverges     below -> 0
 *
 * Custom kinds are probed numerically with `probes` quotients at the
 * doubling term indices 32, 64, 128, ...; the verdict is `converged` when
 * every successive pair agrees to 1e-9 relative, `diverged` when every pair
 * grows by at least 10%, and `undetermined` otherwise.  Throws
 * std::invalid_argument when probes < 3.  A max_index cap is ignored: the
 * limit refers to the uncapped sequence.
 */
[[nodiscard]] RatioLimit ratio_limit(const SequenceCell& family,
                                     std::size_t probes = 3);

// ---------------------------------------------------------------------------
// Pointwise verdicts
// ---------------------------------------------------------------------------

enum class RegularityReason {
  /// The point is isolated in the scale; every map is continuous there.
  isolated,
  /// The point is right-dense, so the forward jump is the identity nearby.
  right_dense,
  /// Left-scattered point: the forward jump cannot be approached from the
  /// left, so continuity holds and the backward quotient is a plain ratio.
  ls_with_continuous_sigma,
  /// Right-scattered and left-dense: the forward jump has a genuine jump
  /// discontinuity of size mu at this point.
  rs_ld_discontinuity,
  /// Dense point whose quotient limit exists along every relevant family.
  ratio_limit_exists,
  /// A contributing family's quotient grows without bound.
  ratio_diverges,
  /// Numeric probing of a custom family reached no verdict.
  ratio_undetermined,
  /// Both one-sided quotient limits exist but disagree.
  left_right_mismatch,
};

[[nodiscard]] std::string_view to_label(RegularityReason r);

struct RegularityVerdict {
  bool continuous_at = false;
  bool nabla_differentiable_at = false;
  /// Present exactly when nabla_differentiable_at is true.
  std::optional<double> sigma_nabla_value;
  RegularityReason reason = RegularityReason::right_dense;
  /// Quotient limits actually consulted, when a side was approached through
  /// a sequence family or an interval (interval contributions are the exact
  /// limit 1).
  std::optional<RatioLimit> left_ratio;
  std::optional<RatioLimit> right_ratio;
};

/// Scatteredness of a point of an analytic scale, honouring the endpoint
/// conventions (the minimum is left-dense, the maximum right-dense).
/// Throws std::domain_error when t is not in the scale.
[[nodiscard]] PointClass classify_point(const AnalyticScale& scale, double t);

/**
 * Continuity of the forward jump operator at t.  The operator is continuous
 * at every point except those that are simultaneously right-scattered and
 * left-dense - excluding the scale minimum, which is topologically isolated
 * from the left.  Only the continuity fields of the verdict are populated.
 */
[[nodiscard]] RegularityVerdict sigma_continuous_at(const AnalyticScale& scale,
                                                    double t);

/**
 * Backward differentiability of the forward jump operator at t, together
 * with its derivative value when it exists.
 *
 *   - Left-scattered points: the derivative always exists and equals the
 *     ratio of forward to backward step, mu(t)/nu(t).
 *   - Right-scattered, left-dense points: the operator is discontinuous,
 *     hence not differentiable.
 *   - Dense points: the derivative is the common value of the one-sided
 *     difference-quotient limits (an interval side contributes 1, a family
 *     side its ratio limit); the verdict records divergence, undetermined
 *     probes, or a left/right mismatch distinctly.
 *
 * Throws std::domain_error when t is not in the scale, and when t is the
 * scale minimum and right-scattered (the derivative's domain excludes a
 * right-scattered minimum).
 */
[[nodiscard]] RegularityVerdict sigma_nabla_at(const AnalyticScale& scale,
                                               double t);

// ---------------------------------------------------------------------------
// Whole-scale surveys
// ---------------------------------------------------------------------------

struct RegularitySurvey {
  /// Forward jump continuous on the whole scale.
  bool sigma_continuous = true;
  /// Both jump operators continuous: additionally no point other than the
  /// maximum is left-scattered and right-dense.
  bool quasi_regular = true;
  /// Points (excluding the minimum) that are right-scattered and left-dense.
  std::vector<double> sigma_discontinuities;
  /// Points (excluding the maximum) that are left-scattered and right-dense.
  std::vector<double> rho_discontinuities;
};

/**
 * Scans the scale's structural transition points.  Offending points can
 * only occur where density meets a gap: interval endpoints, accumulation
 * points, listed points, and extreme family terms - all of which appear in
 * AnalyticScale::notable_points.
 */
[[nodiscard]] RegularitySurvey survey_regularity(const AnalyticScale& scale);

[[nodiscard]] bool sigma_continuous_everywhere(const AnalyticScale& scale);
[[nodiscard]] bool quasi_regular(const AnalyticScale& scale);

}  // namespace tsvar
