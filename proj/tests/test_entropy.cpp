#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "slowent/entropy.hpp"
#include "slowent/error.hpp"

using namespace slowent;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

const double kFibDelta = 2 * fixtures::kLogGolden2;
const double kBlockDelta = 2 * (fixtures::kLogGolden2 + fixtures::kLog2Sqrt3);

} // namespace

TEST(SlowEntropy, FibonacciStandardNorm) {
  const auto spec = compute_spectrum(fixtures::fibonacci());
  const auto rep = slow_entropy(spec, GammaAssignment::haar(spec), NormSpec::l2(1));
  EXPECT_NEAR(rep.total, kFibDelta, 1e-12);
  EXPECT_NEAR(rep.total, 1.9248473, 1e-7);
  EXPECT_NEAR(rep.half_total, fixtures::kLogGolden2, 1e-12);
  EXPECT_NEAR(rep.total, 2 * pesin_entropy(spec, GammaAssignment::haar(spec), Eigen::VectorXd::Ones(1)), 1e-12);
}

TEST(SlowEntropy, BlockActionUnderSeveralNorms) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto g = GammaAssignment::haar(spec);
  // axis-aligned functionals: every lp norm gives the same support values
  for (const auto &n : {NormSpec::l1(2), NormSpec::l2(2), NormSpec::linf(2)}) {
    EXPECT_NEAR(slow_entropy(spec, g, n).total, kBlockDelta, 1e-12) << n.describe();
  }
  EXPECT_NEAR(kBlockDelta, 4.5587632, 1e-6);
  const auto box = NormSpec::weighted_box(Eigen::Vector2d(0.5, 2));
  EXPECT_NEAR(slow_entropy(spec, g, box).total,
              2 * (0.5 * fixtures::kLogGolden2 + 2 * fixtures::kLog2Sqrt3), 1e-12);
}

TEST(SlowEntropy, ScalingTheBallScalesDelta) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto g = GammaAssignment::haar(spec);
  const auto n = NormSpec::l2(2);
  EXPECT_NEAR(slow_entropy(spec, g, n.scaled(3.0)).total, 3.0 * slow_entropy(spec, g, n).total, 1e-12);
}

TEST(Gammas, UserValuesValidated) {
  const auto spec = compute_spectrum(fixtures::fibonacci());
  EXPECT_EQ(code_of([&] { GammaAssignment::user(spec, {1.0}); }), ErrorCode::GammaMismatch);
  EXPECT_EQ(code_of([&] { GammaAssignment::user(spec, {1.0, 1.5}); }), ErrorCode::GammaMismatch);
  EXPECT_EQ(code_of([&] { GammaAssignment::user(spec, {-0.1, 1.0}); }), ErrorCode::GammaMismatch);
  const auto g = GammaAssignment::user(spec, {0.5, 0.5});
  EXPECT_EQ(g.source(), GammaSource::UserSupplied);
  EXPECT_NEAR(slow_entropy(spec, g, NormSpec::l2(1)).total, fixtures::kLogGolden2, 1e-12);
}

TEST(Gammas, IdentitiesHoldForHaar) {
  for (const auto &entry : fixtures::corpus(10, 21)) {
    const auto spec = compute_spectrum(entry.action);
    const auto v = validate_gammas(spec, GammaAssignment::haar(spec), 100);
    EXPECT_EQ(v.trials, 100);
    EXPECT_TRUE(v.sum_passed);
    EXPECT_TRUE(v.abs_passed);
    EXPECT_LT(v.sum_worst, 1e-9);
    EXPECT_LT(v.abs_worst, 1e-9);
  }
}

TEST(Gammas, UnbalancedUserValuesFailSumIdentity) {
  const auto spec = compute_spectrum(fixtures::fibonacci());
  const auto v = validate_gammas(spec, GammaAssignment::user(spec, {1.0, 0.2}), 10);
  EXPECT_FALSE(v.sum_passed);
}

TEST(Pesin, PositiveExponentsOnly) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto g = GammaAssignment::haar(spec);
  EXPECT_NEAR(pesin_entropy(spec, g, Eigen::Vector2d(1, 1)), fixtures::kLogGolden2 + fixtures::kLog2Sqrt3, 1e-12);
  EXPECT_NEAR(pesin_entropy(spec, g, Eigen::Vector2d(-2, 0)), 2 * fixtures::kLogGolden2, 1e-12);
  EXPECT_EQ(code_of([&] { pesin_entropy(spec, g, Eigen::Vector2d::Zero()); }), ErrorCode::ZeroVector);
}

TEST(NormSearch, FamilyMembersHaveUnitVolume) {
  for (const auto family : {NormFamily::WeightedBox, NormFamily::Ellipsoid}) {
    const int np = family == NormFamily::WeightedBox ? 3 : 6;
    std::vector<double> p(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) p[static_cast<std::size_t>(i)] = 0.3 * i - 0.4;
    EXPECT_NEAR(unit_ball_volume(family_member(family, 3, p)), 1.0, 1e-9);
  }
}

TEST(NormSearch, WeightedBoxReachesAmGmBound) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto res = minimize_over_norm_family(spec, GammaAssignment::haar(spec), NormFamily::WeightedBox, 2000, 42);
  const double a = fixtures::kLogGolden2, b = fixtures::kLog2Sqrt3;
  // min of 2(a w1 + b w2) subject to 4 w1 w2 = 1
  EXPECT_NEAR(res.best_value, 2 * std::sqrt(a * b), 1e-6);
  EXPECT_NEAR(res.best_norm.weights()(0), 0.5 * std::sqrt(b / a), 1e-4);
  EXPECT_TRUE(res.converged);
  EXPECT_LE(res.best_value, res.initial_value);
  EXPECT_FALSE(res.trace.empty());
}

TEST(NormSearch, EllipsoidSearchImprovesOnRoundBall) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto g = GammaAssignment::haar(spec);
  const auto res = minimize_over_norm_family(spec, g, NormFamily::Ellipsoid, 2000, 42);
  EXPECT_LE(res.best_value, res.initial_value + 1e-12);
  EXPECT_NEAR(unit_ball_volume(res.best_norm), 1.0, 1e-9);
  EXPECT_NEAR(slow_entropy(spec, g, res.best_norm).total, res.best_value, 1e-9);
}

TEST(NormSearch, DeterministicAndBudgetLimited) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto g = GammaAssignment::haar(spec);
  const auto a = minimize_over_norm_family(spec, g, NormFamily::Ellipsoid, 300, 9);
  const auto b = minimize_over_norm_family(spec, g, NormFamily::Ellipsoid, 300, 9);
  EXPECT_EQ(a.best_value, b.best_value);
  const auto tight = minimize_over_norm_family(spec, g, NormFamily::WeightedBox, 2, 9);
  EXPECT_FALSE(tight.converged);
}
