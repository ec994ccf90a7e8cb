#include "tsvar/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsvar {

namespace {

constexpr double kRatioAgreementTol = 1.0e-9;
constexpr double kRatioGrowthFactor = 1.1;
constexpr std::size_t kProbeBaseIndex = 32;

bool ratios_agree(double x, double y) {
  return std::abs(x - y) <=
         kRatioAgreementTol * std::max({1.0, std::abs(x), std::abs(y)});
}

/// Forward-jump difference quotient along the family at term index k.
double probe_quotient(const SequenceCell& f, std::size_t k) {
  if (f.side == SequenceSide::above) {
    return f.distance(k - 1) / f.distance(k);
  }
  return f.distance(k + 1) / f.distance(k);
}

}  // namespace

std::string_view to_label(RatioStatus s) {
  switch (s) {
    case RatioStatus::converged: return "converged";
    case RatioStatus::diverged: return "diverged";
    case RatioStatus::undetermined: return "undetermined";
  }
  return "?";
}

std::string_view to_label(RegularityReason r) {
  switch (r) {
    case RegularityReason::isolated: return "isolated";
    case RegularityReason::right_dense: return "right_dense";
    case RegularityReason::ls_with_continuous_sigma:
      return "ls_with_continuous_sigma";
    case RegularityReason::rs_ld_discontinuity: return "rs_ld_discontinuity";
    case RegularityReason::ratio_limit_exists: return "ratio_limit_exists";
    case RegularityReason::ratio_diverges: return "ratio_diverges";
    case RegularityReason::ratio_undetermined: return "ratio_undetermined";
    case RegularityReason::left_right_mismatch: return "left_right_mismatch";
  }
  return "?";
}

RatioLimit ratio_limit(const SequenceCell& family, std::size_t probes) {
  if (probes < 3) {
    throw std::invalid_argument("ratio_limit: needs at least 3 probes");
  }
  const bool above = family.side == SequenceSide::above;
  switch (family.kind) {
    case SequenceKind::geometric:
      return {RatioStatus::converged,
              above ? family.ratio : 1.0 / family.ratio, std::nullopt};
    case SequenceKind::power:
      return {RatioStatus::converged, 1.0, std::nullopt};
    case SequenceKind::factorial:
      if (above) {
        // Quotient at index k equals k, doubling with the index.
        return {RatioStatus::diverged,
                kProbeBaseIndex * std::pow(2.0, double(probes - 1)), 1.0};
      }
      return {RatioStatus::converged, 0.0, std::nullopt};
    case SequenceKind::custom:
      break;
  }
  std::vector<double> q(probes);
  for (std::size_t j = 0; j < probes; ++j) {
    q[j] = probe_quotient(family, kProbeBaseIndex << j);
    if (!std::isfinite(q[j])) {
      return {RatioStatus::undetermined, q[j], std::nullopt};
    }
  }
  bool agree = true;
  bool grows = true;
  for (std::size_t j = 0; j + 1 < probes; ++j) {
    agree = agree && ratios_agree(q[j], q[j + 1]);
    grows = grows && q[j + 1] >= kRatioGrowthFactor * q[j];
  }
  if (agree) {
    return {RatioStatus::converged, q.back(), std::nullopt};
  }
  if (grows) {
    return {RatioStatus::diverged, q.back(),
            std::log2(q[probes - 1] / q[probes - 2])};
  }
  return {RatioStatus::undetermined, q.back(), std::nullopt};
}

namespace {

PointClass classify_structure(const AnalyticScale& scale, double t,
                              const AnalyticScale::LocalStructure& local) {
  PointClass cls;
  cls.right_scattered =
      t != scale.b() && local.right == AnalyticScale::Approach::none;
  cls.left_scattered =
      t != scale.a() && local.left == AnalyticScale::Approach::none;
  return cls;
}

}  // namespace

PointClass classify_point(const AnalyticScale& scale, double t) {
  const auto local = scale.local_structure(t);
  if (!local.member) {
    throw std::domain_error("classify_point: point is not in the scale");
  }
  return classify_structure(scale, t, local);
}

RegularityVerdict sigma_continuous_at(const AnalyticScale& scale, double t) {
  const PointClass cls = classify_point(scale, t);
  RegularityVerdict v;
  v.continuous_at =
      t == scale.a() || !(cls.right_scattered && cls.left_dense());
  if (!v.continuous_at) {
    v.reason = RegularityReason::rs_ld_discontinuity;
  } else if (cls.isolated() || (t == scale.a() && cls.right_scattered)) {
    v.reason = RegularityReason::isolated;
  } else if (cls.left_scattered) {
    v.reason = RegularityReason::ls_with_continuous_sigma;
  } else {
    v.reason = RegularityReason::right_dense;
  }
  return v;
}

RegularityVerdict sigma_nabla_at(const AnalyticScale& scale, double t) {
  const auto local = scale.local_structure(t);
  if (!local.member) {
    throw std::domain_error("sigma_nabla_at: point is not in the scale");
  }
  const PointClass cls = classify_structure(scale, t, local);
  if (t == scale.a() && cls.right_scattered) {
    throw std::domain_error(
        "sigma_nabla_at: the scale minimum is right-scattered, so it lies "
        "outside the backward derivative's domain");
  }

  RegularityVerdict v;
  if (cls.left_scattered) {
    // The backward quotient is exact: (sigma(t) - sigma(rho(t))) / nu with
    // sigma(rho(t)) = t, i.e. mu(t) / nu(t).
    const double nu = t - *local.prev;
    const double mu = cls.right_scattered ? *local.next - t : 0.0;
    v.continuous_at = true;
    v.nabla_differentiable_at = true;
    v.sigma_nabla_value = mu / nu;
    v.reason = cls.right_scattered ? RegularityReason::isolated
                                   : RegularityReason::ls_with_continuous_sigma;
    return v;
  }
  if (cls.right_scattered) {
    // Right-scattered and left-dense (t != a here): sigma jumps.
    v.continuous_at = false;
    v.reason = RegularityReason::rs_ld_discontinuity;
    return v;
  }

  // Dense point: gather the one-sided quotient limits.  A side approached
  // through an interval contributes the exact limit 1.
  v.continuous_at = true;
  bool family_involved = false;
  if (t != scale.a()) {
    if (local.left == AnalyticScale::Approach::family) {
      v.left_ratio = ratio_limit(*local.left_family);
      family_involved = true;
    } else {
      v.left_ratio = RatioLimit{RatioStatus::converged, 1.0, std::nullopt};
    }
  }
  if (t != scale.b()) {
    if (local.right == AnalyticScale::Approach::family) {
      v.right_ratio = ratio_limit(*local.right_family);
      family_involved = true;
    } else {
      v.right_ratio = RatioLimit{RatioStatus::converged, 1.0, std::nullopt};
    }
  }
  const auto status_of = [](const std::optional<RatioLimit>& r) {
    return r ? r->status : RatioStatus::converged;
  };
  if (status_of(v.left_ratio) == RatioStatus::diverged ||
      status_of(v.right_ratio) == RatioStatus::diverged) {
    v.reason = RegularityReason::ratio_diverges;
    return v;
  }
  if (status_of(v.left_ratio) == RatioStatus::undetermined ||
      status_of(v.right_ratio) == RatioStatus::undetermined) {
    v.reason = RegularityReason::ratio_undetermined;
    return v;
  }
  if (v.left_ratio && v.right_ratio) {
    const double l = v.left_ratio->value;
    const double r = v.right_ratio->value;
    if (!ratios_agree(l, r)) {
      v.reason = RegularityReason::left_right_mismatch;
      return v;
    }
    v.sigma_nabla_value = l == r ? l : 0.5 * (l + r);
  } else if (v.left_ratio) {
    v.sigma_nabla_value = v.left_ratio->value;
  } else {
    v.sigma_nabla_value = v.right_ratio->value;
  }
  v.nabla_differentiable_at = true;
  v.reason = family_involved ? RegularityReason::ratio_limit_exists
                             : RegularityReason::right_dense;
  return v;
}

RegularitySurvey survey_regularity(const AnalyticScale& scale) {
  RegularitySurvey out;
  for (double t : scale.notable_points()) {
    const PointClass cls = classify_point(scale, t);
    if (t != scale.a() && cls.right_scattered && cls.left_dense()) {
      out.sigma_continuous = false;
      out.quasi_regular = false;
      out.sigma_discontinuities.push_back(t);
    }
    if (t != scale.b() && cls.left_scattered && cls.right_dense()) {
      out.quasi_regular = false;
      out.rho_discontinuities.push_back(t);
    }
  }
  return out;
}

bool sigma_continuous_everywhere(const AnalyticScale& scale) {
  return survey_regularity(scale).sigma_continuous;
}

bool quasi_regular(const AnalyticScale& scale) {
  return survey_regularity(scale).quasi_regular;
}

}  // namespace tsvar
