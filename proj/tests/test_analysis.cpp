#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "support/generators.hpp"
#include "tsvar/analytic_scale.hpp"
#include "tsvar/regularity.hpp"

using namespace tsvar;

namespace {

SequenceCell geometric_family(SequenceSide side, double accumulation,
                              double ratio, double amplitude = 1.0) {
  SequenceCell f;
  f.kind = SequenceKind::geometric;
  f.side = side;
  f.accumulation = accumulation;
  f.ratio = ratio;
  f.amplitude = amplitude;
  return f;
}

SequenceCell power_family(SequenceSide side, double accumulation,
                          double exponent, double amplitude = 1.0) {
  SequenceCell f;
  f.kind = SequenceKind::power;
  f.side = side;
  f.accumulation = accumulation;
  f.exponent = exponent;
  f.amplitude = amplitude;
  return f;
}

SequenceCell factorial_family(SequenceSide side, double accumulation,
                              double amplitude = 1.0) {
  SequenceCell f;
  f.kind = SequenceKind::factorial;
  f.side = side;
  f.accumulation = accumulation;
  f.amplitude = amplitude;
  return f;
}

SequenceCell custom_family(SequenceSide side, double accumulation,
                           std::function<double(std::size_t)> gen,
                           double amplitude = 1.0) {
  SequenceCell f;
  f.kind = SequenceKind::custom;
  f.side = side;
  f.accumulation = accumulation;
  f.amplitude = amplitude;
  f.generator = std::move(gen);
  return f;
}

/// T = {0} u {1/2^k : k >= 0}.
AnalyticScale canonical_geometric() {
  return AnalyticScale::from_cells(
      {geometric_family(SequenceSide::above, 0.0, 2.0)});
}

/// T = [0,1] u [2,3].
AnalyticScale two_intervals() {
  return AnalyticScale::from_cells(
      {IntervalCell{0.0, 1.0}, IntervalCell{2.0, 3.0}});
}

/// T = {0,1} u [2,3].
AnalyticScale points_then_interval() {
  return AnalyticScale::from_cells(
      {PointListCell{{0.0, 1.0}}, IntervalCell{2.0, 3.0}});
}

/// T = [-1,0] u {1/k : k >= 1}.
AnalyticScale interval_then_harmonic() {
  return AnalyticScale::from_cells(
      {IntervalCell{-1.0, 0.0}, power_family(SequenceSide::above, 0.0, 1.0)});
}

}  // namespace

TEST_CASE("analytic scale construction validates cells") {
  CHECK_THROWS_AS(AnalyticScale::from_cells({}), std::invalid_argument);
  CHECK_THROWS_AS(AnalyticScale::from_cells({IntervalCell{1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnalyticScale::from_cells({PointListCell{{}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnalyticScale::from_cells({PointListCell{{0.0, 2.0, 1.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnalyticScale::from_cells({PointListCell{{0.0, 0.0, 1.0}}}),
                  std::invalid_argument);
  // A two-point scale is not a valid bounded time scale here.
  CHECK_THROWS_AS(AnalyticScale::from_cells({PointListCell{{0.0, 1.0}}}),
                  std::invalid_argument);

  CHECK_THROWS_AS(AnalyticScale::from_cells(
                      {geometric_family(SequenceSide::above, 0.0, 1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnalyticScale::from_cells(
                      {power_family(SequenceSide::above, 0.0, 0.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnalyticScale::from_cells({geometric_family(
                      SequenceSide::above, 0.0, 2.0, 0.0)}),
                  std::invalid_argument);
  SequenceCell no_gen;
  no_gen.kind = SequenceKind::custom;
  CHECK_THROWS_AS(AnalyticScale::from_cells({no_gen}), std::invalid_argument);
  SequenceCell bad_cap = power_family(SequenceSide::above, 0.0, 1.0);
  bad_cap.max_index = 0;  // below the first term index
  CHECK_THROWS_AS(AnalyticScale::from_cells({bad_cap}), std::invalid_argument);
  auto constant = custom_family(SequenceSide::above, 0.0,
                                [](std::size_t) { return 0.5; });
  CHECK_THROWS_AS(AnalyticScale::from_cells({constant}),
                  std::invalid_argument);

  // Overlaps are rejected; touching at a single point is allowed.
  CHECK_THROWS_AS(AnalyticScale::from_cells(
                      {IntervalCell{0.0, 1.0}, IntervalCell{0.5, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      AnalyticScale::from_cells({IntervalCell{0.0, 1.0},
                                 geometric_family(SequenceSide::above, 0.5,
                                                  2.0)}),
      std::invalid_argument);
  const auto touching = AnalyticScale::from_cells(
      {IntervalCell{-1.0, 0.0}, geometric_family(SequenceSide::above, 0.0,
                                                 2.0)});
  CHECK(touching.a() == -1.0);
  CHECK(touching.b() == 1.0);
}

TEST_CASE("membership and jump operators on the canonical geometric scale") {
  const auto scale = canonical_geometric();
  CHECK(scale.a() == 0.0);
  CHECK(scale.b() == 1.0);
  CHECK(scale.contains(0.0));
  CHECK(scale.contains(1.0));
  CHECK(scale.contains(0.5));
  CHECK(scale.contains(1.0 / 1024.0));
  CHECK_FALSE(scale.contains(0.3));
  CHECK_FALSE(scale.contains(-0.1));
  CHECK_FALSE(scale.contains(1.5));
  CHECK_FALSE(scale.contains(3.0 / 8.0));

  CHECK(scale.sigma(0.5) == 1.0);
  CHECK(scale.sigma(0.25) == 0.5);
  CHECK(scale.sigma(1.0) == 1.0);  // maximum
  CHECK(scale.sigma(0.0) == 0.0);  // right-dense accumulation point
  CHECK(scale.rho(0.25) == 0.125);
  CHECK(scale.rho(1.0) == 0.5);
  CHECK(scale.rho(0.0) == 0.0);  // minimum convention
  CHECK_THROWS_AS(scale.sigma(0.3), std::domain_error);
  CHECK_THROWS_AS(scale.rho(-2.0), std::domain_error);

  const auto local = scale.local_structure(0.0);
  CHECK(local.member);
  CHECK(local.right == AnalyticScale::Approach::family);
  CHECK(local.left == AnalyticScale::Approach::none);
  CHECK_FALSE(local.prev.has_value());
}

TEST_CASE("membership and jumps across interval-family unions") {
  const auto scale = interval_then_harmonic();
  CHECK(scale.contains(-0.5));
  CHECK(scale.contains(-1.0));
  CHECK(scale.contains(0.0));
  CHECK(scale.contains(1.0 / 7.0));
  CHECK_FALSE(scale.contains(0.15));
  CHECK_FALSE(scale.contains(1.1));

  CHECK(scale.sigma(-0.5) == -0.5);
  CHECK(scale.sigma(0.0) == 0.0);   // dense from the right via the family
  CHECK(scale.rho(0.0) == 0.0);     // dense from the left via the interval
  CHECK(scale.sigma(1.0 / 3.0) == 0.5);
  CHECK(scale.rho(1.0 / 3.0) == 0.25);
  CHECK(scale.rho(1.0 / 7.0) == 0.125);
  CHECK(scale.sigma(1.0) == 1.0);

  // Capped family: a finite point set.
  SequenceCell capped = geometric_family(SequenceSide::above, 0.0, 2.0);
  capped.max_index = 5;
  const auto finite = AnalyticScale::from_cells({capped});
  CHECK(finite.contains(1.0 / 32.0));
  CHECK_FALSE(finite.contains(1.0 / 64.0));
  CHECK(finite.sigma(0.0) == 1.0 / 32.0);  // scattered: next finite term
  CHECK(finite.rho(1.0 / 32.0) == 0.0);
  CHECK(finite.rho(0.0) == 0.0);
}

TEST_CASE("point classification honours endpoint conventions") {
  const auto gaps = two_intervals();
  CHECK(classify_point(gaps, 1.0).label() == "RS|LD");
  CHECK(classify_point(gaps, 2.0).label() == "RD|LS");
  CHECK(classify_point(gaps, 0.5).label() == "RD|LD");
  CHECK(classify_point(gaps, 0.0).label() == "RD|LD");  // minimum convention
  CHECK(classify_point(gaps, 3.0).label() == "RD|LD");  // maximum convention

  const auto mixed = points_then_interval();
  const auto at1 = classify_point(mixed, 1.0);
  CHECK(at1.isolated());
  CHECK(at1.label() == "RS|LS");
  const auto at0 = classify_point(mixed, 0.0);
  CHECK(at0.right_scattered);
  CHECK(at0.left_dense());  // minimum is left-dense by convention

  const auto geo = canonical_geometric();
  const auto acc = classify_point(geo, 0.0);
  CHECK(acc.right_dense());
  CHECK(acc.left_dense());
  CHECK(classify_point(geo, 0.5).isolated());

  CHECK_THROWS_AS(classify_point(geo, 0.3), std::domain_error);
}

TEST_CASE("forward-jump continuity verdicts match the worked examples") {
  // Single interval: continuous everywhere.
  const auto interval = AnalyticScale::from_cells({IntervalCell{0.0, 1.0}});
  CHECK(sigma_continuous_everywhere(interval));
  auto v = sigma_continuous_at(interval, 0.5);
  CHECK(v.continuous_at);
  CHECK(v.reason == RegularityReason::right_dense);

  // Finite scale: continuous everywhere.
  const auto finite =
      AnalyticScale::from_cells({PointListCell{{0.0, 0.5, 1.2, 3.0}}});
  CHECK(sigma_continuous_everywhere(finite));
  CHECK(sigma_continuous_at(finite, 0.5).reason ==
        RegularityReason::isolated);

  // {0,1} u [2,3]: continuous, including at the scattered points.
  const auto mixed = points_then_interval();
  CHECK(sigma_continuous_everywhere(mixed));
  v = sigma_continuous_at(mixed, 1.0);
  CHECK(v.continuous_at);
  CHECK(v.reason == RegularityReason::isolated);
  v = sigma_continuous_at(mixed, 2.0);
  CHECK(v.continuous_at);
  CHECK(v.reason == RegularityReason::ls_with_continuous_sigma);
  // The minimum may be right-scattered without breaking continuity.
  v = sigma_continuous_at(mixed, 0.0);
  CHECK(v.continuous_at);
  CHECK(v.reason == RegularityReason::isolated);

  // [-1,0] u {1/k}: continuous everywhere.
  const auto harmonic = interval_then_harmonic();
  CHECK(sigma_continuous_everywhere(harmonic));
  v = sigma_continuous_at(harmonic, 0.0);
  CHECK(v.continuous_at);
  CHECK(v.reason == RegularityReason::right_dense);
  CHECK(sigma_continuous_at(harmonic, 1.0 / 3.0).reason ==
        RegularityReason::isolated);

  // [0,1] u [2,3]: the gap after a dense stretch breaks continuity at 1.
  const auto gaps = two_intervals();
  CHECK_FALSE(sigma_continuous_everywhere(gaps));
  v = sigma_continuous_at(gaps, 1.0);
  CHECK_FALSE(v.continuous_at);
  CHECK(v.reason == RegularityReason::rs_ld_discontinuity);
  CHECK(sigma_continuous_at(gaps, 0.5).continuous_at);
  CHECK(sigma_continuous_at(gaps, 2.0).continuous_at);
}

TEST_CASE("backward differentiability at scattered points") {
  const auto finite =
      AnalyticScale::from_cells({PointListCell{{0.0, 1.0, 3.0}}});
  auto v = sigma_nabla_at(finite, 1.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.continuous_at);
  CHECK(v.sigma_nabla_value == 2.0);  // mu/nu = 2/1
  CHECK(v.reason == RegularityReason::isolated);
  v = sigma_nabla_at(finite, 3.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 0.0);  // mu(b) = 0
  // The minimum is right-scattered: outside the derivative's domain.
  CHECK_THROWS_AS(sigma_nabla_at(finite, 0.0), std::domain_error);
  CHECK_THROWS_AS(sigma_nabla_at(finite, 0.4), std::domain_error);

  const auto gaps = two_intervals();
  v = sigma_nabla_at(gaps, 2.0);  // left-scattered, right-dense
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 0.0);  // mu = 0, nu = 1
  CHECK(v.reason == RegularityReason::ls_with_continuous_sigma);
  v = sigma_nabla_at(gaps, 1.0);  // right-scattered, left-dense
  CHECK_FALSE(v.continuous_at);
  CHECK_FALSE(v.nabla_differentiable_at);
  CHECK_FALSE(v.sigma_nabla_value.has_value());
  CHECK(v.reason == RegularityReason::rs_ld_discontinuity);

  // The derivative of the forward jump at the minimum of [0,1]: domain ok
  // (0 is right-dense) and the interval gives slope 1.
  v = sigma_nabla_at(gaps, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 1.0);
  CHECK(v.reason == RegularityReason::right_dense);
}

TEST_CASE("jump derivative at accumulation points: convergent families") {
  // Generic decreasing positive sequence with an exact quotient limit,
  // probed numerically: z_k = 3^-k.
  const auto generic_above = AnalyticScale::from_cells({custom_family(
      SequenceSide::above, 0.0,
      [](std::size_t k) { return std::pow(3.0, -double(k)); })});
  auto v = sigma_nabla_at(generic_above, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value.value() == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(v.reason == RegularityReason::ratio_limit_exists);

  // {0} u {1/r^k} with r = 2: the derivative at 0 is r.
  v = sigma_nabla_at(canonical_geometric(), 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 2.0);
  CHECK(v.reason == RegularityReason::ratio_limit_exists);

  // Increasing negative sequence, generic: z_k = -3^-k; limit 1/3 at b = 0.
  const auto generic_below = AnalyticScale::from_cells({custom_family(
      SequenceSide::below, 0.0,
      [](std::size_t k) { return std::pow(3.0, -double(k)); })});
  v = sigma_nabla_at(generic_below, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value.value() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  // {0} u {-1/r^k}: the derivative at 0 is 1/r.
  const auto below = AnalyticScale::from_cells(
      {geometric_family(SequenceSide::below, 0.0, 2.0)});
  v = sigma_nabla_at(below, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 0.5);

  // [-1,0] u {z_k} with quotient limit 1 (generic power family, p = 1).
  const auto generic_slow = AnalyticScale::from_cells(
      {IntervalCell{-1.0, 0.0}, power_family(SequenceSide::above, 0.0, 1.0)});
  v = sigma_nabla_at(generic_slow, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 1.0);
  CHECK(v.reason == RegularityReason::ratio_limit_exists);

  // [-1,0] u {1/k^2}: same conclusion.
  const auto squares = AnalyticScale::from_cells(
      {IntervalCell{-1.0, 0.0}, power_family(SequenceSide::above, 0.0, 2.0)});
  v = sigma_nabla_at(squares, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 1.0);

  // Two-sided accumulation with equal limits forces the value 1.
  const auto generic_two_sided = AnalyticScale::from_cells(
      {power_family(SequenceSide::below, 0.0, 1.0),
       power_family(SequenceSide::above, 0.0, 3.0)});
  v = sigma_nabla_at(generic_two_sided, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 1.0);
  CHECK(v.left_ratio.has_value());
  CHECK(v.right_ratio.has_value());

  // {0} u {-1/k} u {1/k^2}: the classic concrete two-sided instance.
  const auto concrete_two_sided = AnalyticScale::from_cells(
      {power_family(SequenceSide::below, 0.0, 1.0),
       power_family(SequenceSide::above, 0.0, 2.0)});
  v = sigma_nabla_at(concrete_two_sided, 0.0);
  CHECK(v.nabla_differentiable_at);
  CHECK(v.sigma_nabla_value == 1.0);
}

TEST_CASE("jump derivative at accumulation points: failures are explained") {
  // {0} u {1/k!}: the quotient k grows without bound.
  const auto fact = AnalyticScale::from_cells(
      {factorial_family(SequenceSide::above, 0.0)});
  auto v = sigma_nabla_at(fact, 0.0);
  CHECK(v.continuous_at);
  CHECK_FALSE(v.nabla_differentiable_at);
  CHECK_FALSE(v.sigma_nabla_value.has_value());
  CHECK(v.reason == RegularityReason::ratio_diverges);
  REQUIRE(v.right_ratio.has_value());
  CHECK(v.right_ratio->status == RatioStatus::diverged);
  CHECK(v.right_ratio->divergence_rate.value() == 1.0);

  // [-1,0] u {1/2^k}: left slope 1 from the interval, right slope 2.
  const auto mismatch = AnalyticScale::from_cells(
      {IntervalCell{-1.0, 0.0}, geometric_family(SequenceSide::above, 0.0,
                                                 2.0)});
  v = sigma_nabla_at(mismatch, 0.0);
  CHECK(v.continuous_at);
  CHECK_FALSE(v.nabla_differentiable_at);
  CHECK(v.reason == RegularityReason::left_right_mismatch);
  CHECK(v.left_ratio->value == 1.0);
  CHECK(v.right_ratio->value == 2.0);

  // {0} u {+-1/2^k}: slopes 1/2 and 2 disagree.
  const auto symmetric = AnalyticScale::from_cells(
      {geometric_family(SequenceSide::below, 0.0, 2.0),
       geometric_family(SequenceSide::above, 0.0, 2.0)});
  v = sigma_nabla_at(symmetric, 0.0);
  CHECK(v.continuous_at);
  CHECK_FALSE(v.nabla_differentiable_at);
  CHECK(v.reason == RegularityReason::left_right_mismatch);
  CHECK(v.left_ratio->value == 0.5);
  CHECK(v.right_ratio->value == 2.0);

  // Custom family with slowly drifting quotients: honestly undetermined.
  const auto drifting = AnalyticScale::from_cells({custom_family(
      SequenceSide::above, 0.0,
      [](std::size_t k) { return 1.0 / double(k); })});
  v = sigma_nabla_at(drifting, 0.0);
  CHECK(v.continuous_at);
  CHECK_FALSE(v.nabla_differentiable_at);
  CHECK(v.reason == RegularityReason::ratio_undetermined);
}

TEST_CASE("ratio limits: closed forms and numeric probing") {
  auto r = ratio_limit(geometric_family(SequenceSide::above, 0.0, 3.0));
  CHECK(r.converged());
  CHECK(r.value == 3.0);
  r = ratio_limit(geometric_family(SequenceSide::below, 0.0, 3.0));
  CHECK(r.converged());
  CHECK(r.value == 1.0 / 3.0);

  r = ratio_limit(power_family(SequenceSide::above, 0.0, 2.0));
  CHECK(r.converged());
  CHECK(r.value == 1.0);
  r = ratio_limit(power_family(SequenceSide::below, 0.0, 2.0));
  CHECK(r.value == 1.0);

  r = ratio_limit(factorial_family(SequenceSide::above, 0.0));
  CHECK(r.status == RatioStatus::diverged);
  CHECK(r.divergence_rate.value() == 1.0);
  r = ratio_limit(factorial_family(SequenceSide::below, 0.0));
  CHECK(r.converged());
  CHECK(r.value == 0.0);

  // The numeric estimator fed a geometric generator reproduces the closed
  // form within 1e-9.
  for (double rho : {1.5, 2.0, 3.0}) {
    const auto closed =
        ratio_limit(geometric_family(SequenceSide::above, 0.0, rho));
    const auto probed = ratio_limit(custom_family(
        SequenceSide::above, 0.0,
        [rho](std::size_t k) { return std::pow(rho, -double(k)); }));
    CHECK(probed.converged());
    CHECK(probed.value == doctest::Approx(closed.value).epsilon(1e-9));
  }

  // Custom factorial-like generator: divergence detected with unit rate.
  const auto fact_probe = ratio_limit(custom_family(
      SequenceSide::above, 0.0, [](std::size_t k) {
        double f = 1.0;
        for (std::size_t i = 2; i <= k; ++i) f *= double(i);
        return 1.0 / f;
      }));
  CHECK(fact_probe.status == RatioStatus::diverged);
  CHECK(fact_probe.value == doctest::Approx(128.0).epsilon(1e-12));
  CHECK(fact_probe.divergence_rate.value() == doctest::Approx(1.0).epsilon(1e-9));

  // Slowly converging quotients stay undetermined at finite probes.
  const auto slow = ratio_limit(custom_family(
      SequenceSide::above, 0.0,
      [](std::size_t k) { return 1.0 / double(k); }));
  CHECK(slow.status == RatioStatus::undetermined);

  CHECK_THROWS_AS(
      ratio_limit(geometric_family(SequenceSide::above, 0.0, 2.0), 2),
      std::invalid_argument);
  // More probes sharpen nothing for exact generators but stay converged.
  const auto more = ratio_limit(
      custom_family(SequenceSide::above, 0.0,
                    [](std::size_t k) { return std::pow(2.0, -double(k)); }),
      5);
  CHECK(more.converged());
  CHECK(more.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("quasi-regularity surveys") {
  CHECK(quasi_regular(
      AnalyticScale::from_cells({PointListCell{{0.0, 0.3, 0.9, 2.0}}})));
  CHECK(quasi_regular(AnalyticScale::from_cells({IntervalCell{0.0, 1.0}})));
  CHECK(quasi_regular(interval_then_harmonic()));
  CHECK_FALSE(quasi_regular(two_intervals()));

  const auto survey = survey_regularity(two_intervals());
  CHECK_FALSE(survey.sigma_continuous);
  CHECK_FALSE(survey.quasi_regular);
  REQUIRE(survey.sigma_discontinuities.size() == 1);
  CHECK(survey.sigma_discontinuities[0] == 1.0);
  REQUIRE(survey.rho_discontinuities.size() == 1);
  CHECK(survey.rho_discontinuities[0] == 2.0);

  // Forward-jump continuity alone does not give quasi-regularity.
  const auto mixed = survey_regularity(points_then_interval());
  CHECK(mixed.sigma_continuous);
  CHECK_FALSE(mixed.quasi_regular);
  REQUIRE(mixed.rho_discontinuities.size() == 1);
  CHECK(mixed.rho_discontinuities[0] == 2.0);
}

TEST_CASE("truncation to finite grids") {
  // Capped geometric family, budget exactly the cell cardinality.
  SequenceCell capped = geometric_family(SequenceSide::above, 0.0, 2.0);
  capped.max_index = 5;
  const auto tr = truncate_to_grid(AnalyticScale::from_cells({capped}), 7, 2);
  const std::vector<double> expected{0.0,        1.0 / 32.0, 1.0 / 16.0,
                                     1.0 / 8.0,  1.0 / 4.0,  1.0 / 2.0,
                                     1.0};
  REQUIRE(tr.grid.size() == 7);
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(tr.grid[k] == expected[k]);
  }
  REQUIRE(tr.accumulation_indices.size() == 1);
  CHECK(tr.accumulation_indices.count(0) == 1);
  CHECK(tr.accumulation_indices.at(0) == 0.0);

  // Pure interval sampling.
  const auto interval = truncate_to_grid(
      AnalyticScale::from_cells({IntervalCell{0.0, 1.0}}), 3, 5);
  REQUIRE(interval.grid.size() == 5);
  CHECK(interval.grid[0] == 0.0);
  CHECK(interval.grid[1] == 0.25);
  CHECK(interval.grid[2] == 0.5);
  CHECK(interval.grid[3] == 0.75);
  CHECK(interval.grid[4] == 1.0);
  CHECK(interval.accumulation_indices.empty());

  // Mixed cells: sorted merge with the duplicate accumulation removed.
  const auto mixed = truncate_to_grid(
      AnalyticScale::from_cells({IntervalCell{-1.0, 0.0},
                                 power_family(SequenceSide::above, 0.0, 2.0)}),
      6, 4);
  REQUIRE(mixed.grid.size() == 9);
  for (std::size_t k = 0; k + 1 < mixed.grid.size(); ++k) {
    CHECK(mixed.grid[k] < mixed.grid[k + 1]);
  }
  CHECK(mixed.grid[0] == -1.0);
  CHECK(mixed.grid[3] == 0.0);
  CHECK(mixed.grid[8] == 1.0);
  CHECK(mixed.grid[4] == 1.0 / 25.0);
  REQUIRE(mixed.accumulation_indices.size() == 1);
  CHECK(mixed.accumulation_indices.count(3) == 1);

  // Budget big enough for a capped family: slots simply run out.
  SequenceCell tiny = geometric_family(SequenceSide::above, 0.0, 2.0);
  tiny.max_index = 3;
  const auto all =
      truncate_to_grid(AnalyticScale::from_cells({tiny}), 10, 2);
  CHECK(all.grid.size() == 5);  // {0, 1/8, 1/4, 1/2, 1}

  // Factorial truncation keeps the farthest terms.
  const auto fact = truncate_to_grid(
      AnalyticScale::from_cells({factorial_family(SequenceSide::above, 0.0)}),
      8, 2);
  REQUIRE(fact.grid.size() == 8);
  CHECK(fact.grid[0] == 0.0);
  CHECK(fact.grid[1] == 1.0 / 5040.0);
  CHECK(fact.grid[7] == 1.0);

  // Errors: tiny budgets and trivial interval resolutions.
  CHECK_THROWS_AS(truncate_to_grid(canonical_geometric(), 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(truncate_to_grid(canonical_geometric(), 4, 1),
                  std::invalid_argument);
  const auto two_sided = AnalyticScale::from_cells(
      {geometric_family(SequenceSide::below, 0.0, 2.0),
       geometric_family(SequenceSide::above, 0.0, 2.0)});
  CHECK_THROWS_AS(truncate_to_grid(two_sided, 3, 2), std::invalid_argument);
}

TEST_CASE("equivalence chain on random scales") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    const auto scale = tsvar::testing::random_analytic_scale(rng);
    CAPTURE(trial);
    for (double t : scale.notable_points()) {
      CAPTURE(t);
      const auto cls = classify_point(scale, t);
      // Scatteredness agrees with the jump operators, exactly.
      CHECK((scale.sigma(t) == t) == !cls.right_scattered);
      CHECK((scale.rho(t) == t) == !cls.left_scattered);

      const bool in_t_kappa = !(t == scale.a() && cls.right_scattered);
      if (in_t_kappa) {
        // Continuity of the forward jump <=> sigma(rho(t)) = t
        // <=> t is not right-scattered-and-left-dense.
        const bool identity = scale.sigma(scale.rho(t)) == t;
        const bool structural =
            !(cls.right_scattered && cls.left_dense());
        const bool verdict = sigma_continuous_at(scale, t).continuous_at;
        CHECK(identity == structural);
        if (t != scale.a()) {
          CHECK(verdict == identity);
        } else {
          CHECK(verdict);
        }
      }
      const bool in_t_upper_kappa =
          !(t == scale.b() && cls.left_scattered);
      if (in_t_upper_kappa) {
        const bool identity = scale.rho(scale.sigma(t)) == t;
        const bool structural = !(cls.left_scattered && cls.right_dense());
        CHECK(identity == structural);
      }

      // Verdict invariants for the derivative of the forward jump.
      if (in_t_kappa) {
        const auto v = sigma_nabla_at(scale, t);
        if (v.nabla_differentiable_at) {
          CHECK(v.continuous_at);
        }
        CHECK(v.sigma_nabla_value.has_value() == v.nabla_differentiable_at);
        CHECK(v.continuous_at == sigma_continuous_at(scale, t).continuous_at);
      }
    }
  }
}

TEST_CASE("grid and analytic scattered-point derivatives agree exactly") {
  // A finite analytic scale truncates to itself; the backward derivative of
  // the forward jump must agree bit-for-bit between representations.
  const std::vector<double> pts{0.0, 0.7, 1.9, 2.4, 4.1};
  const auto analytic = AnalyticScale::from_cells({PointListCell{pts}});
  const auto tr = truncate_to_grid(analytic, 3, 2);
  REQUIRE(tr.grid.size() == pts.size());
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const auto v = sigma_nabla_at(analytic, pts[k]);
    REQUIRE(v.nabla_differentiable_at);
    CHECK(v.sigma_nabla_value.value() == tr.grid.sigma_nabla(k));
  }

  SequenceCell capped = geometric_family(SequenceSide::above, 0.0, 2.0);
  capped.max_index = 6;
  const auto geo = AnalyticScale::from_cells({capped});
  const auto geo_grid = truncate_to_grid(geo, 8, 2);
  REQUIRE(geo_grid.grid.size() == 8);
  for (std::size_t k = 2; k < geo_grid.grid.size(); ++k) {
    const auto v = sigma_nabla_at(geo, geo_grid.grid[k]);
    REQUIRE(v.nabla_differentiable_at);
    CHECK(v.sigma_nabla_value.value() == geo_grid.grid.sigma_nabla(k));
  }
}

TEST_CASE("resolution limits are reported honestly") {
  const auto harmonic_custom = AnalyticScale::from_cells({custom_family(
      SequenceSide::above, 0.0,
      [](std::size_t k) { return 1.0 / double(k); })});
  CHECK_THROWS_AS(harmonic_custom.contains(1.0e-9), ScaleResolutionError);

  const auto steep = AnalyticScale::from_cells(
      {power_family(SequenceSide::above, 0.0, 0.5)});
  CHECK_THROWS_AS(steep.contains(1.0e-40), ScaleResolutionError);
}
