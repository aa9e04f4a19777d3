#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ras/error.hpp"
#include "ras/lattice.hpp"

using namespace ras;

TEST(Zeta, IndicatorOfFullSet) {
  const SetIndex sets(Menu({"a", "b", "c"}), false);
  std::vector<double> mu(sets.size(), 0.0);
  mu.back() = 1.0;
  const auto alpha = zeta_transform(mu, sets);
  for (std::size_t k = 0; k + 1 < sets.size(); ++k) EXPECT_EQ(alpha[k], 0.0);
  EXPECT_EQ(alpha.back(), 1.0);
}

TEST(Zeta, UniformSingletonsTwoItems) {
  const SetIndex sets(Menu({"a", "b"}), false);
  const auto alpha = zeta_transform(std::vector<double>{0.5, 0.5, 0.0}, sets);
  EXPECT_DOUBLE_EQ(alpha[0], 0.5);
  EXPECT_DOUBLE_EQ(alpha[1], 0.5);
  EXPECT_DOUBLE_EQ(alpha[2], 1.0);
}

TEST(Zeta, MatchesDirectSubsetSums) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, char('a' + i)));
    for (bool outside : {false, true}) {
      const SetIndex sets(Menu(labels, 0), outside);
      Eigen::VectorXd mu(Eigen::Index(sets.size()));
      for (Eigen::Index k = 0; k < mu.size(); ++k) mu(k) = u(rng);
      const auto alpha = zeta_transform(std::vector<double>(mu.data(), mu.data() + mu.size()), sets);
      for (std::size_t k = 0; k < sets.size(); ++k) {
        EXPECT_NEAR(alpha[k], ras::testing::brute_alpha(mu, sets, sets.set(k).mask), 1e-13);
      }
    }
  }
}

TEST(Zeta, RoundTripsBothWays) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, char('a' + i)));
    for (bool outside : {false, true}) {
      const SetIndex sets(Menu(labels, n - 1), outside);
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> v(sets.size());
        for (auto& x : v) x = std::abs(g(rng));
        const auto back = moebius_inverse(zeta_transform(v, sets), sets);
        const auto forth = zeta_transform(moebius_inverse(v, sets), sets);
        for (std::size_t k = 0; k < v.size(); ++k) {
          EXPECT_NEAR(back[k], v[k], 1e-12);
          EXPECT_NEAR(forth[k], v[k], 1e-12);
        }
      }
    }
  }
}

TEST(Zeta, RejectsWrongLength) {
  const SetIndex sets(Menu({"a", "b"}), false);
  EXPECT_THROW(zeta_transform(std::vector<double>(4, 0.0), sets), DimensionError);
  EXPECT_THROW(moebius_inverse(std::vector<double>(2, 0.0), sets), DimensionError);
  std::vector<double> three(3, 0.0);
  EXPECT_THROW(subset_sum_inplace(three), DimensionError);
}
