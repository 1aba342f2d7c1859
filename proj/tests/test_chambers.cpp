#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "slowent/chambers.hpp"
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

LyapunovSpectrum hand_spectrum(const std::vector<Eigen::VectorXd> &cs) {
  std::vector<LyapunovFunctional> fs;
  for (const auto &c : cs) fs.push_back({c, 1, false});
  return LyapunovSpectrum(fs, static_cast<int>(cs.size()), static_cast<int>(cs.front().size()));
}

// Distinct sign vectors hit by many random directions.
std::set<std::vector<int>> sampled_sign_vectors(const HyperplaneArrangement &arr, int samples) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::set<std::vector<int>> out;
  for (int i = 0; i < samples; ++i) {
    Eigen::VectorXd t(arr.rank);
    for (int j = 0; j < arr.rank; ++j) t(j) = g(rng);
    std::vector<int> s;
    for (const auto &n : arr.normals) s.push_back(n.dot(t) > 0 ? 1 : -1);
    out.insert(s);
  }
  return out;
}

} // namespace

TEST(Chambers, BlockActionHasFourAntipodalChambers) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto arr = lyapunov_hyperplanes(spec);
  ASSERT_EQ(arr.normals.size(), 2u);
  EXPECT_EQ(arr.source_indices[0].size(), 2u);
  const auto chambers = enumerate_chambers(arr);
  ASSERT_EQ(chambers.size(), 4u);
  std::set<std::vector<int>> signs;
  for (const auto &c : chambers) signs.insert(c.sign_vector);
  for (const auto &c : chambers) {
    std::vector<int> neg = c.sign_vector;
    for (int &x : neg) x = -x;
    EXPECT_TRUE(signs.count(neg));
    const auto cls = classify_element(spec, c.representative);
    EXPECT_TRUE(cls.regular);
    EXPECT_EQ(cls.sign_vector, c.sign_vector);
  }
}

TEST(Chambers, RankOneHasTwoRays) {
  const auto spec = compute_spectrum(fixtures::fibonacci());
  const auto chambers = enumerate_chambers(lyapunov_hyperplanes(spec));
  ASSERT_EQ(chambers.size(), 2u);
  EXPECT_EQ(chambers[0].representative(0), -chambers[1].representative(0));
}

TEST(ChambersProperty, PlanarCountIsTwiceTheLines) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0, M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    const int lines = 1 + trial % 5;
    std::vector<Eigen::VectorXd> normals;
    for (int i = 0; i < lines; ++i) {
      const double a = angle(rng);
      normals.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    const auto arr = make_arrangement(2, normals);
    const auto chambers = enumerate_chambers(arr);
    EXPECT_EQ(chambers.size(), 2 * arr.normals.size());
    EXPECT_EQ(sampled_sign_vectors(arr, 20000).size(), chambers.size());
  }
}

TEST(Chambers, SpatialArrangementsMatchRegionFormula) {
  // n planes through 0 in general position in R^3: n^2 - n + 2 regions
  const std::vector<Eigen::VectorXd> normals{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                                             Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 1, 1),
                                             Eigen::Vector3d(1, -2, 0.5)};
  for (std::size_t n = 1; n <= normals.size(); ++n) {
    const auto arr = make_arrangement(3, {normals.begin(), normals.begin() + static_cast<long>(n)});
    const auto chambers = enumerate_chambers(arr);
    EXPECT_EQ(chambers.size(), n * n - n + 2) << n;
    for (const auto &c : chambers) {
      for (std::size_t j = 0; j < arr.normals.size(); ++j) {
        EXPECT_GT(c.sign_vector[j] * arr.normals[j].dot(c.representative), 1e-6);
      }
    }
  }
}

TEST(Chambers, RankFourCoordinateHyperplanes) {
  std::vector<Eigen::VectorXd> normals;
  for (int j = 0; j < 4; ++j) normals.push_back(Eigen::VectorXd::Unit(4, j));
  EXPECT_EQ(enumerate_chambers(make_arrangement(4, normals)).size(), 16u);
  normals.clear();
  for (int j = 0; j < 5; ++j) normals.push_back(Eigen::VectorXd::Unit(5, j));
  EXPECT_EQ(code_of([&] { enumerate_chambers(make_arrangement(5, normals)); }), ErrorCode::RankTooLarge);
}

TEST(Chambers, ParallelNormalsDeduplicate) {
  const auto arr = make_arrangement(2, {Eigen::Vector2d(1, 1), Eigen::Vector2d(-2, -2), Eigen::Vector2d(1, 0)});
  EXPECT_EQ(arr.normals.size(), 2u);
}

TEST(Classify, SingularAndZero) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto on_axis = classify_element(spec, Eigen::Vector2d(1, 0));
  EXPECT_FALSE(on_axis.regular);
  EXPECT_EQ(on_axis.singular_hyperplanes.size(), 1u);
  EXPECT_FALSE(classify_element(spec, Eigen::Vector2d(1e-12, 1e-12)).regular);
  EXPECT_TRUE(classify_element(spec, Eigen::Vector2d(1, 1e-3)).regular);
  EXPECT_EQ(code_of([&] { classify_element(spec, Eigen::Vector2d::Zero()); }), ErrorCode::ZeroVector);
}

TEST(Classify, AllZeroSpectrumRejected) {
  const auto spec = compute_spectrum(verify_action({fixtures::mat2(0, 1, -1, 0)}));
  EXPECT_EQ(code_of([&] { lyapunov_hyperplanes(spec); }), ErrorCode::AllZeroSpectrum);
}

TEST(GenericElement, SeparatesExponents) {
  const auto spec = compute_spectrum(fixtures::t4_block());
  const auto norm = NormSpec::l2(2);
  const Eigen::VectorXd t = pick_generic_element(spec, norm);
  EXPECT_LE(norm_value(norm, t), 1.0 + 1e-12);
  EXPECT_GT(separation_score(spec, t), 0.1);
  EXPECT_TRUE(classify_element(spec, t).regular);
  EXPECT_EQ(t, pick_generic_element(spec, norm));
}

TEST(GenericElement, NearlyEqualFunctionalsCannotBeSeparated) {
  const auto spec = hand_spectrum({Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1e-13)});
  EXPECT_EQ(code_of([&] { pick_generic_element(spec, NormSpec::l2(2)); }), ErrorCode::NoSeparatingElement);
}
