#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ras/error.hpp"
#include "ras/hyptest.hpp"
#include "ras/sampler.hpp"

using namespace ras;

namespace {

struct TwoItem {
  Menu menu{{"a", "b"}};
  SetIndex sets{menu, false};
  OrderingSet orderings{{PreferenceOrdering({0, 1}), PreferenceOrdering({1, 0})}};
  ChoiceTransform transform = build_choice_transform(sets, orderings);
};

}  // namespace

TEST(DefaultTau, FormulaAndCap) {
  EXPECT_NEAR(default_tau_n(6, 500), std::min(std::sqrt(std::log(6.0) / 500.0), 1.0 / 12.0), 1e-15);
  EXPECT_NEAR(default_tau_n(6, 10), 1.0 / 12.0, 1e-15);
  EXPECT_EQ(default_tau_n(1, 100), 0.0);
}

TEST(VarianceWeights, BinomialFormulaAndDroppedCells) {
  Eigen::MatrixXd pi(2, 2);
  pi << 0.5, 0.5, 1.0, 0.0;
  const VarianceWeights w = variance_weights(ChoiceDataset(pi, {100, 50}));
  EXPECT_DOUBLE_EQ(w.omega(0), 0.0025);
  EXPECT_DOUBLE_EQ(w.inverse(0), 400.0);
  EXPECT_EQ(w.omega(2), 0.0);
  EXPECT_EQ(w.inverse(2), 0.0);
  EXPECT_EQ(w.inverse(3), 0.0);
  EXPECT_THROW(variance_weights(ChoiceDataset(pi)), ConfigError);
}

TEST(VarianceWeights, DegenerateRowAllZero) {
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(1, 6);
  pi(0, 5) = 1.0;
  const VarianceWeights w = variance_weights(ChoiceDataset(pi, {10}));
  EXPECT_EQ(w.inverse.cwiseAbs().sum(), 0.0);
}

TEST(TestStatistic, ZeroOnExactModelData) {
  const TwoItem s;
  Eigen::MatrixXd u(2, 6);
  u << 0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.2, 0.2, 0.6, 0.2, 0.2, 0.6;
  const AttentionRule rule(u, s.sets, 2);
  const ChoiceDataset exact = predict_choices(rule, s.transform, PreferenceDistribution(Eigen::Vector2d(0.3, 0.7)));
  const ChoiceDataset pi(exact.pi(), {100, 100});
  const StatisticResult r = test_statistic(pi, rule, s.transform, variance_weights(pi), 0.0);
  EXPECT_LT(r.t_n, 1e-16);
  EXPECT_FALSE(r.degenerate);
  EXPECT_LT((r.eta_hat - pi.vec()).norm(), 1e-9);
}

TEST(TestStatistic, AllWeightsZeroIsDegenerate) {
  const TwoItem s;
  const AttentionRule rule(Eigen::MatrixXd::Constant(1, 6, 1.0 / 3.0), s.sets, 2);
  Eigen::MatrixXd pi(1, 2);
  pi << 1.0, 0.0;
  const ChoiceDataset d(pi, {20});
  const StatisticResult r = test_statistic(d, rule, s.transform, variance_weights(d), 0.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.t_n, 0.0);
}

TEST(TestStatistic, GridOracleTwoItems) {
  const TwoItem s;
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const AttentionRule rule(ras::testing::random_attention(2, 2, 3, rng), s.sets, 2);
    Eigen::MatrixXd pi(2, 2);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (Eigen::Index t = 0; t < 2; ++t) {
      pi(t, 0) = unif(rng);
      pi(t, 1) = 1.0 - pi(t, 0);
    }
    const ChoiceDataset d(pi, {60, 40});
    const VarianceWeights w = variance_weights(d);
    const double tau = 0.2;
    const StatisticResult r = test_statistic(d, rule, s.transform, w, tau);
    const Eigen::MatrixXd m = design_matrix(rule, s.transform);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
      const double p0 = i / 1000.0;
      if (p0 < tau / 2 - 1e-12 || 1.0 - p0 < tau / 2 - 1e-12) continue;
      const Eigen::VectorXd resid = d.vec() - m * Eigen::Vector2d(p0, 1.0 - p0);
      best = std::min(best, 100.0 * (resid.array().square() * w.inverse.array()).sum());
    }
    EXPECT_LE(r.t_n, best + 1e-9);
    EXPECT_NEAR(r.t_n, best, 1e-4 * std::max(1.0, best));
    EXPECT_GE(r.p_tau.minCoeff(), tau / 2 - 1e-15);
  }
}

TEST(TestStatistic, RejectsInfeasibleTau) {
  const TwoItem s;
  const AttentionRule rule(Eigen::MatrixXd::Constant(1, 6, 1.0 / 3.0), s.sets, 2);
  Eigen::MatrixXd pi(1, 2);
  pi << 0.4, 0.6;
  const ChoiceDataset d(pi, {20});
  EXPECT_THROW(test_statistic(d, rule, s.transform, variance_weights(d), 2.5), ConfigError);
  EXPECT_THROW(test_statistic(d, rule, s.transform, variance_weights(d), -1.0), ConfigError);
}

TEST(TestConfig, Validation) {
  TestConfig c;
  c.alpha = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.alpha = 0.05;
  c.replications = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.replications = 9;
  c.tau_n = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Bootstrap, ResultIsConsistentAndDeterministic) {
  const Menu menu({"a", "b", "c"});
  const SetIndex sets(menu, false);
  const OrderingSet orderings = OrderingSet::all(3);
  const auto transform = build_choice_transform(sets, orderings);
  SamplerConfig sc;
  sc.periods = 3;
  sc.seed = 4;
  const AttentionRule rule = sample_attention_rule(sets, orderings, sc);
  const ChoiceDataset exact = predict_choices(rule, transform, PreferenceDistribution::uniform(6));
  const ChoiceDataset pi(exact.pi(), {200, 200, 200});
  TestConfig config;
  config.replications = 199;
  config.seed = 8;
  const TestResult a = bootstrap_test(pi, rule, transform, config);
  config.threads = 1;
  const TestResult b = bootstrap_test(pi, rule, transform, config);
  EXPECT_EQ(a.bootstrap_statistics, b.bootstrap_statistics);
  EXPECT_EQ(a.t_n, b.t_n);

  EXPECT_GE(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
  EXPECT_EQ(a.reject, a.t_n > a.critical_value);
  std::vector<double> sorted = a.bootstrap_statistics;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(a.critical_value, sorted[std::size_t(std::ceil(0.95 * 199)) - 1]);
  std::size_t exceed = 0;
  for (double t : a.bootstrap_statistics) exceed += t >= a.t_n ? 1 : 0;
  EXPECT_DOUBLE_EQ(a.p_value, (1.0 + double(exceed)) / 200.0);
  EXPECT_FALSE(a.reject);
  for (double t : a.bootstrap_statistics) EXPECT_GE(t, 0.0);
}

TEST(Bootstrap, GrossViolationRejects) {
  const TwoItem s;
  Eigen::MatrixXd u(2, 6);
  u << 0.6, 0.4, 0.0, 0.6, 0.4, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  const AttentionRule rule(u, s.sets, 2);
  // Under this rule π(b|t) must fall over time for either ordering mix; data has it rising sharply.
  Eigen::MatrixXd pi(2, 2);
  pi << 0.9, 0.1, 0.2, 0.8;
  TestConfig config;
  config.replications = 199;
  config.tau_n = 0.0;
  const TestResult r = bootstrap_test(ChoiceDataset(pi, {500, 500}), rule, s.transform, config);
  EXPECT_TRUE(r.reject);
  EXPECT_LT(r.p_value, 0.01);
}

TEST(Bootstrap, NeedsCounts) {
  const TwoItem s;
  const AttentionRule rule(Eigen::MatrixXd::Constant(1, 6, 1.0 / 3.0), s.sets, 2);
  Eigen::MatrixXd pi(1, 2);
  pi << 0.4, 0.6;
  EXPECT_THROW(bootstrap_test(ChoiceDataset(pi), rule, s.transform, TestConfig{}), ConfigError);
}
