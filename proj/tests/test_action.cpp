#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "slowent/error.hpp"

using namespace slowent;
using fixtures::mat2;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument; // sentinel: nothing thrown
}

// Real root of x^3 - x - 1 by bisection.
double plastic_number() {
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid - mid - 1 > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST(VerifyAction, RejectsBadInput) {
  EXPECT_EQ(code_of([] { verify_action({}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { verify_action({mat2(2, 0, 0, 1)}); }), ErrorCode::NonUnimodular);
  EXPECT_EQ(code_of([] { verify_action({IntMatrix::Identity(1, 1)}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { verify_action({IntMatrix::Identity(2, 3)}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { verify_action({IntMatrix::Identity(2, 2), IntMatrix::Identity(3, 3)}); }),
            ErrorCode::DimensionMismatch);
}

TEST(VerifyAction, NamesNonCommutingPair) {
  try {
    verify_action({mat2(2, 1, 1, 1), mat2(1, 1, 0, 1)});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::NonCommuting);
    EXPECT_STREQ(e.what(), "NonCommuting (0,1)");
  }
}

TEST(VerifyAction, AcceptsDeterminantMinusOne) {
  EXPECT_NO_THROW(verify_action({mat2(1, 1, 1, 0)}));
}

TEST(Spectrum, FibonacciMatchesCharacteristicPolynomial) {
  const auto spec = compute_spectrum(fixtures::fibonacci());
  ASSERT_EQ(spec.size(), 2u);
  EXPECT_NEAR(spec[0].coeffs(0), fixtures::kLogGolden2, 1e-12);
  EXPECT_NEAR(spec[1].coeffs(0), -fixtures::kLogGolden2, 1e-12);
  EXPECT_NEAR(spec[0].coeffs(0), 0.9624237, 1e-7);
  EXPECT_TRUE(spec.invariant_violations().empty());
}

TEST(Spectrum, BlockActionOrdering) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  ASSERT_EQ(spec.size(), 4u);
  const double a = fixtures::kLogGolden2, b = fixtures::kLog2Sqrt3;
  const Eigen::Vector2d expected[] = {{a, 0}, {-a, 0}, {0, b}, {0, -b}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_LT((spec[static_cast<std::size_t>(i)].coeffs - expected[i]).cwiseAbs().maxCoeff(), 1e-12) << i;
  }
}

TEST(Spectrum, ComplexPairHasMultiplicityTwo) {
  IntMatrix c(3, 3);
  c << 0, 0, 1, 1, 0, 1, 0, 1, 0; // companion of x^3 - x - 1
  const auto spec = compute_spectrum(verify_action({c}));
  ASSERT_EQ(spec.size(), 2u);
  const double r = std::log(plastic_number());
  EXPECT_NEAR(spec[0].coeffs(0), r, 1e-10);
  EXPECT_EQ(spec[0].multiplicity, 1);
  EXPECT_NEAR(spec[1].coeffs(0), -r / 2, 1e-10);
  EXPECT_EQ(spec[1].multiplicity, 2);
}

TEST(Spectrum, IsometryAndUnipotentGiveZero) {
  for (const IntMatrix &m : {mat2(0, 1, -1, 0), mat2(1, 1, 0, 1), mat2(-1, 0, 0, -1)}) {
    const auto spec = compute_spectrum(verify_action({m}));
    ASSERT_EQ(spec.size(), 1u);
    EXPECT_EQ(spec[0].multiplicity, 2);
    EXPECT_NEAR(spec[0].coeffs(0), 0.0, 1e-12);
  }
}

TEST(Spectrum, EqualFunctionalsMerge) {
  const IntMatrix a = mat2(2, 1, 1, 1);
  const auto spec = compute_spectrum(verify_action({fixtures::block_diag(a, a)}));
  ASSERT_EQ(spec.size(), 2u);
  EXPECT_EQ(spec[0].multiplicity, 2);
  EXPECT_EQ(spec[1].multiplicity, 2);
}

TEST(Spectrum, DecompositionSubspacesAreInvariant) {
  const auto action = fixtures::t4_block();
  const auto d = decompose(action);
  ASSERT_EQ(d.subspaces.size(), d.spectrum.size());
  for (const auto &w : d.subspaces) {
    for (const auto &g : action.generators()) {
      const Eigen::MatrixXd gw = g.cast<double>() * w;
      const Eigen::MatrixXd proj = w * (w.transpose() * gw);
      EXPECT_LT((gw - proj).norm(), 1e-10);
    }
  }
}

TEST(SpectrumProperty, CorpusMatchesBlockOracle) {
  for (const auto &entry : fixtures::corpus(30, 11)) {
    const auto spec = compute_spectrum(entry.action);
    EXPECT_LT(fixtures::spectrum_distance(spec, entry.expected), 1e-9);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(spec.rank());
    for (const auto &f : spec.functionals()) sum += f.multiplicity * f.coeffs;
    EXPECT_LT(sum.cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(spec.total_multiplicity(), spec.dim());
  }
}

TEST(SpectrumProperty, InversionNegatesAndConjugationPreserves) {
  std::mt19937_64 rng(3);
  for (const auto &entry : fixtures::corpus(20, 5)) {
    const auto spec = compute_spectrum(entry.action);
    std::vector<fixtures::Expected> negated;
    for (const auto &f : spec.functionals()) negated.push_back({-f.coeffs, f.multiplicity});
    EXPECT_LT(fixtures::spectrum_distance(compute_spectrum(entry.action.inverse()), negated), 1e-8);

    std::vector<fixtures::Expected> same;
    for (const auto &f : spec.functionals()) same.push_back({f.coeffs, f.multiplicity});
    const IntMatrix p = fixtures::random_unimodular(entry.action.dim(), rng, 3);
    EXPECT_LT(fixtures::spectrum_distance(compute_spectrum(entry.action.conjugate(p)), same), 1e-8);
  }
}

TEST(Spectrum, EvaluateAndSuspend) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const Eigen::VectorXd chi = evaluate_exponent(spec, Eigen::Vector2d(1, -2));
  EXPECT_NEAR(chi(0), fixtures::kLogGolden2, 1e-12);
  EXPECT_NEAR(chi(2), -2 * fixtures::kLog2Sqrt3, 1e-12);
  EXPECT_EQ(code_of([&] { evaluate_exponent(spec, Eigen::Vector3d(1, 0, 0)); }), ErrorCode::DimensionMismatch);

  const auto sus = suspend(spec);
  EXPECT_TRUE(sus.suspended());
  EXPECT_EQ(sus.size(), 5u);
  EXPECT_EQ(sus.non_orbit_indices().size(), 4u);
  EXPECT_EQ(code_of([&] { suspend(sus); }), ErrorCode::AlreadySuspended);
}

TEST(Spectrum, HandBuiltSpectrumReportsViolations) {
  LyapunovSpectrum bad({{Eigen::VectorXd::Constant(1, 1.0), 1, false}}, 2, 1);
  EXPECT_FALSE(bad.invariant_violations().empty());
}
