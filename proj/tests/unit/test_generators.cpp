#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "satisficing_oracle.hpp"
#include "ras/error.hpp"
#include "ras/generators.hpp"

using namespace ras;

TEST(TopN, SearchOrderPrefixes) {
  const Menu menu({"a", "b", "c"});
  const SetIndex sets(menu, false);
  const AttentionRule rule = gen_topn(sets, 3, {0, 1, 2});
  EXPECT_EQ(rule.mu(0, 0, *sets.position(0b001)), 1.0);
  EXPECT_EQ(rule.mu(0, 1, *sets.position(0b011)), 1.0);
  EXPECT_EQ(rule.mu(0, 2, *sets.position(0b111)), 1.0);
  EXPECT_TRUE(check_time_monotonicity(rule).pass);

  const AttentionRule one = gen_topn(sets, 1, {2, 0, 1});
  EXPECT_EQ(one.mu(0, 0, *sets.position(0b100)), 1.0);

  const AttentionRule saturated = gen_topn(sets, 5, {1, 2, 0});
  EXPECT_EQ(saturated.mu(0, 4, sets.full_position()), 1.0);
  EXPECT_THROW(gen_topn(sets, 2, {0, 0, 1}), ConfigError);
}

TEST(TopN, OutsideMode) {
  const SetIndex sets(Menu({"a", "b", "o"}, 2), true);
  const AttentionRule rule = gen_topn(sets, 2, {1, 0, 2}, 2);
  EXPECT_EQ(rule.mu(1, 0, *sets.position(0b110)), 1.0);
  EXPECT_EQ(rule.mu(1, 1, *sets.position(0b111)), 1.0);
}

TEST(MM, FullAttention) {
  const SetIndex sets(Menu({"a", "b", "c"}), false);
  const AttentionRule rule = gen_mm(sets, GammaSchedule(Eigen::MatrixXd::Ones(2, 3)));
  EXPECT_EQ(rule.mu(0, 1, sets.full_position()), 1.0);
}

TEST(MM, ProductFormulaOutsideMode) {
  const Menu menu({"a", "b", "o"}, 2);
  const SetIndex sets(menu, true);
  Eigen::MatrixXd gamma(1, 3);
  gamma << 0.5, 0.5, 1.0;
  const AttentionRule rule = gen_mm(sets, GammaSchedule(gamma));
  EXPECT_NEAR(accumulated_attention(rule, 0, 0, {0b100}), 0.25, 1e-15);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Menu four({"o", "a", "b", "c"}, 0);
  const SetIndex four_sets(four, true);
  Eigen::MatrixXd g(3, 4);
  for (Eigen::Index j = 1; j < 4; ++j) {
    double level = 0.0;
    for (Eigen::Index t = 0; t < 3; ++t) g(t, j) = level = level + (1.0 - level) * u(rng);
  }
  g.col(0).setOnes();
  const AttentionRule mm = gen_mm(four_sets, GammaSchedule(g));
  for (std::size_t t = 0; t < 3; ++t) {
    for (const auto& s : four_sets.sets()) {
      double expected = 1.0;
      for (std::size_t b = 0; b < 4; ++b) {
        if (!s.contains(b)) expected *= 1.0 - g(Eigen::Index(t), Eigen::Index(b));
      }
      EXPECT_NEAR(accumulated_attention(mm, 0, t, s), expected, 1e-12);
    }
  }
  EXPECT_TRUE(check_time_monotonicity(mm, 1e-12).pass);
}

TEST(MM, Validation) {
  const SetIndex plain(Menu({"a", "b"}), false);
  EXPECT_THROW(gen_mm(plain, GammaSchedule(Eigen::MatrixXd::Zero(1, 2))), DomainError);
  Eigen::MatrixXd falling(2, 2);
  falling << 0.5, 0.5, 0.4, 0.6;
  EXPECT_THROW(GammaSchedule{falling}, ConfigError);
  EXPECT_THROW(GammaSchedule{Eigen::MatrixXd::Constant(1, 2, 1.5)}, ConfigError);
  const SetIndex outside(Menu({"a", "o"}, 1), true);
  EXPECT_THROW(gen_mm(outside, GammaSchedule(Eigen::MatrixXd::Constant(1, 2, 0.5))), ConfigError);
}

TEST(MM, PerPreferenceSchedules) {
  const SetIndex sets(Menu({"a", "b", "o"}, 2), true);
  Eigen::MatrixXd g1(1, 3), g2(1, 3);
  g1 << 1.0, 0.0, 1.0;
  g2 << 0.0, 1.0, 1.0;
  const AttentionRule rule = gen_mm(sets, GammaSchedule(std::vector<Eigen::MatrixXd>{g1, g2}), 2);
  EXPECT_EQ(rule.mu(0, 0, *sets.position(0b101)), 1.0);
  EXPECT_EQ(rule.mu(1, 0, *sets.position(0b110)), 1.0);
}

TEST(Diffusion, GammaFormula) {
  for (double t : {0.5, 1.0, 3.0}) EXPECT_NEAR(diffusion_gamma(2.0, 1.5, 2.0 * t, t), 0.5, 1e-15);
  EXPECT_GT(diffusion_gamma(50.0, 1.0, 1.0, 5.0), 1.0 - 1e-12);
  EXPECT_NEAR(diffusion_gamma(0.0, 1.0, 1.0, 1.0), 0.5 * std::erfc(1.0 / std::sqrt(2.0)), 1e-15);
  EXPECT_THROW(diffusion_gamma(1.0, 0.0, 1.0, 1.0), ConfigError);
}

TEST(Diffusion, ConstantThresholdsAreMonotone) {
  const SetIndex sets(Menu({"a", "b", "c"}), false);
  const Eigen::MatrixXd thresholds = Eigen::MatrixXd::Constant(4, 3, 1.5);
  const AttentionRule rule = gen_diffusion(sets, {0.2, 1.0, 3.0}, 1.0, thresholds);
  EXPECT_TRUE(check_time_monotonicity(rule).pass);
}

TEST(Diffusion, RisingThresholdRejected) {
  const SetIndex sets(Menu({"a", "b"}), false);
  Eigen::MatrixXd thresholds(2, 2);
  thresholds << 1.0, 1.0, 1.0, 1.2;
  EXPECT_THROW(gen_diffusion(sets, {1.0, 1.0}, 1.0, thresholds), ConfigError);
}

TEST(Thresholds, DistributionsAndFosd) {
  const ThresholdDist n = ThresholdDist::normal(1.0, 2.0);
  EXPECT_NEAR(n.cdf(1.0), 0.5, 1e-15);
  EXPECT_NEAR(n.prob_at_most(1.0), 0.5, 1e-15);
  const ThresholdDist lo = ThresholdDist::point_mass(-std::numeric_limits<double>::infinity());
  EXPECT_EQ(lo.cdf(-1e300), 1.0);
  EXPECT_TRUE(fosd_ordered(linear_normal_thresholds(4, 0.0, 0.5, 1.0)));
  EXPECT_FALSE(fosd_ordered({ThresholdDist::normal(1.0, 1.0), ThresholdDist::normal(0.0, 1.0)}));
  EXPECT_THROW(linear_normal_thresholds(3, 0.0, -1.0, 1.0), ConfigError);
  EXPECT_EQ(uniform_search_orders(3).size(), 6u);
}

TEST(Satisficing, MinusInfinityThresholdGivesSingletons) {
  const Menu menu({"a", "b", "c"});
  SatisficingConfig config;
  config.utilities = {3.0, 2.0, 1.0};
  config.thresholds = {ThresholdDist::point_mass(-std::numeric_limits<double>::infinity())};
  config.search = uniform_search_orders(3);
  config.draws_per_period = 3000;
  const SatisficingSample s = gen_satisficing(menu, config);
  const auto& sets = s.rule.set_index();
  double singleton_mass = 0.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets.set(k).size() == 1) singleton_mass += s.rule.mu(0, 0, k);
  }
  EXPECT_EQ(singleton_mass, 1.0);
  EXPECT_EQ(s.preference.rank(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Satisficing, MatchesClosedFormAtTenThousandDraws) {
  const Menu menu({"y1", "y2", "y3"});
  SatisficingConfig config;
  config.utilities = {1.0, 0.2, -0.5};
  config.thresholds = linear_normal_thresholds(3, -0.3, 0.4, 0.8);
  config.search = uniform_search_orders(3);
  const double probs[] = {0.3, 0.1, 0.25, 0.05, 0.2, 0.1};
  for (std::size_t k = 0; k < 6; ++k) config.search[k].probability = probs[k];
  config.draws_per_period = 10000;
  config.seed = 2024;
  const SatisficingSample s = gen_satisficing(menu, config);
  const double n = double(config.draws_per_period);
  for (std::size_t t = 0; t < 3; ++t) {
    const double top_two = ras::testing::satisficing_alpha_top_two(config.utilities, config.search,
                                                                   config.thresholds[t], 0, 1, 2);
    EXPECT_NEAR(top_two, ras::testing::satisficing_alpha(config.utilities, config.search, config.thresholds[t], 0b011),
                1e-15);
    for (Mask a = 1; a < 7; ++a) {
      const double exact = ras::testing::satisficing_alpha(config.utilities, config.search, config.thresholds[t], a);
      const double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / n);
      EXPECT_NEAR(accumulated_attention(s.rule, 0, t, {a}), exact, 4.0 * se) << "t=" << t << " A=" << a;
    }
  }
  EXPECT_TRUE(check_time_monotonicity(s.rule, 0.02).pass);
}

TEST(Satisficing, Validation) {
  const Menu menu({"a", "b"});
  SatisficingConfig config;
  config.utilities = {1.0, 0.0};
  config.thresholds = {ThresholdDist::normal(1.0, 1.0), ThresholdDist::normal(0.0, 1.0)};
  config.search = uniform_search_orders(2);
  EXPECT_THROW(gen_satisficing(menu, config), ConfigError);
  config.thresholds = {ThresholdDist::normal(0.0, 1.0)};
  config.utilities = {1.0, 1.0};
  EXPECT_THROW(gen_satisficing(menu, config), ConfigError);
  config.utilities = {1.0, 0.0};
  EXPECT_THROW(gen_satisficing(Menu({"a", "o"}, 1), config), ConfigError);
}
