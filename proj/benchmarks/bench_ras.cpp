#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <span>

#include "ras/core.hpp"
#include "ras/estimator.hpp"
#include "ras/lattice.hpp"
#include "ras/matrix.hpp"
#include "ras/random.hpp"
#include "ras/sampler.hpp"
#include "ras/simplex_ls.hpp"

using namespace ras;

namespace {

SetIndex outside_menu(std::size_t n) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < n; ++i) items.push_back("x" + std::to_string(i));
  return SetIndex(Menu(items, n - 1), true);
}

void BM_SimplexLs(benchmark::State& state) {
  const auto rows = Eigen::Index(state.range(0));
  const auto cols = Eigen::Index(state.range(1));
  Rng rng = make_stream(1, {});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return u(rng); });
  Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(rows, [&] { return u(rng); });
  for (auto _ : state) benchmark::DoNotOptimize(solve_simplex_ls(m, b));
}
BENCHMARK(BM_SimplexLs)->Args({36, 6})->Args({120, 24})->Args({720, 120});

void BM_SampleRule(benchmark::State& state) {
  const SetIndex sets = outside_menu(std::size_t(state.range(0)));
  SamplerConfig config;
  config.periods = 6;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(sample_attention_rule(sets, 6, config));
  }
}
BENCHMARK(BM_SampleRule)->Arg(4)->Arg(6)->Arg(8);

void BM_Zeta(benchmark::State& state) {
  const auto bits = std::size_t(state.range(0));
  Eigen::VectorXd v = Eigen::VectorXd::Ones(Eigen::Index(1) << bits);
  for (auto _ : state) {
    subset_sum_inplace(std::span<double>(v.data(), std::size_t(v.size())));
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_Zeta)->Arg(5)->Arg(10)->Arg(15);

void BM_Estimate(benchmark::State& state) {
  const SetIndex sets = outside_menu(6);
  std::vector<PreferenceOrdering> list;
  for (std::size_t r = 0; r < 6; ++r) {
    std::vector<std::size_t> rank = {0, 1, 2, 3, 4, 5};
    std::rotate(rank.begin(), rank.begin() + long(r), rank.begin() + 5);
    list.emplace_back(rank);
  }
  const OrderingSet orderings(list);
  SamplerConfig config;
  config.periods = 6;
  config.seed = 99;
  const AttentionRule truth = sample_attention_rule(sets, orderings, config);
  const ChoiceDataset pi =
      predict_choices(truth, build_choice_transform(sets, orderings), PreferenceDistribution::uniform(6));
  EstimateOptions options;
  options.simulations = std::size_t(state.range(0));
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(pi, sets, orderings, options).best_distance);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Estimate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
