#include "ras/hyptest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ras/error.hpp"
#include "ras/parallel.hpp"
#include "ras/random.hpp"
#include "ras/simplex_ls.hpp"

namespace ras {
namespace {

std::size_t rounded_count(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("period counts must be finite and nonnegative");
  return static_cast<std::size_t>(std::llround(c));
}

// Multinomial(n, probs) by sequential binomials.
Eigen::VectorXd resample_row(const Eigen::VectorXd& probs, std::size_t n, Rng& rng) {
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(probs.size());
  if (n == 0) return probs;
  std::size_t remaining = n;
  double mass_left = 1.0;
  for (Eigen::Index j = 0; j < probs.size() && remaining > 0; ++j) {
    const double q = j + 1 == probs.size() ? 1.0 : mass_left > 0.0 ? std::clamp(probs(j) / mass_left, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::size_t> draw(remaining, q);
    const std::size_t k = q >= 1.0 ? remaining : draw(rng);
    freq(j) = double(k);
    remaining -= k;
    mass_left -= probs(j);
    if (mass_left <= 0.0) mass_left = 0.0;
  }
  return freq / double(n);
}

}  // namespace

void TestConfig::validate() const {
  if (tau_n && !(*tau_n >= 0.0)) throw ConfigError("tau_n must be nonnegative");
  if (replications < 1) throw ConfigError("bootstrap needs at least one replication");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in (0, 0.5)");
}

double default_tau_n(std::size_t preference_count, double sample_size) {
  if (preference_count < 1 || !(sample_size > 0.0)) throw ConfigError("default tau_n needs d >= 1 and n > 0");
  const double d = double(preference_count);
  return std::min(std::sqrt(std::log(d) / sample_size), 1.0 / (2.0 * d));
}

VarianceWeights variance_weights(const Eigen::VectorXd& pi_vec, std::size_t items,
                                 const std::vector<double>& period_counts, double floor) {
  if (period_counts.empty()) throw ConfigError("variance weights need period counts");
  if (std::size_t(pi_vec.size()) != items * period_counts.size()) {
    throw DimensionError("choice vector length does not match periods × items");
  }
  VarianceWeights w{Eigen::VectorXd::Zero(pi_vec.size()), Eigen::VectorXd::Zero(pi_vec.size())};
  for (std::size_t t = 0; t < period_counts.size(); ++t) {
    const double n_t = period_counts[t];
    if (!(n_t >= 0.0)) throw DomainError("period counts must be nonnegative");
    for (std::size_t j = 0; j < items; ++j) {
      const auto i = Eigen::Index(t * items + j);
      const double p = pi_vec(i);
      w.omega(i) = n_t > 0.0 ? p * (1.0 - p) / n_t : 0.0;
      w.inverse(i) = w.omega(i) > floor ? 1.0 / w.omega(i) : 0.0;
    }
  }
  return w;
}

VarianceWeights variance_weights(const ChoiceDataset& pi, double floor) {
  return variance_weights(pi.vec(), pi.items(), pi.period_counts(), floor);
}

StatisticResult test_statistic(const Eigen::VectorXd& pi_vec, const Eigen::MatrixXd& design,
                               const Eigen::VectorXd& inverse_weights, double tau_n, double sample_size,
                               bool simplex_sum) {
  if (design.rows() != pi_vec.size() || inverse_weights.size() != pi_vec.size()) {
    throw DimensionError("test statistic inputs differ in length");
  }
  if (!(tau_n >= 0.0)) throw ConfigError("tau_n must be nonnegative");
  const Eigen::Index d = design.cols();
  SimplexLsOptions opts;
  opts.lower_bound = tau_n / double(d);
  opts.sum_to_one = simplex_sum;

  const Eigen::ArrayXd root = inverse_weights.array().sqrt();
  const Eigen::MatrixXd wm = design.array().colwise() * root;
  const Eigen::VectorXd wb = (pi_vec.array() * root).matrix();

  StatisticResult out;
  out.degenerate = !(inverse_weights.array() > 0.0).any();
  try {
    const SimplexLsResult fit = solve_simplex_ls(wm, wb, opts);
    out.p_tau = fit.p;
  } catch (const SolverError& e) {
    out.p_tau = e.best_iterate();
  }
  out.eta_hat = design * out.p_tau;
  out.t_n = sample_size * (wm * out.p_tau - wb).squaredNorm();
  return out;
}

StatisticResult test_statistic(const ChoiceDataset& pi, const AttentionRule& rule, const ChoiceTransform& transform,
                               const VarianceWeights& weights, double tau_n, bool simplex_sum) {
  return test_statistic(pi.vec(), design_matrix(rule, transform), weights.inverse, tau_n, pi.total_count(),
                        simplex_sum);
}

TestResult bootstrap_test(const ChoiceDataset& pi, const AttentionRule& rule, const ChoiceTransform& transform,
                          const TestConfig& config) {
  config.validate();
  if (!pi.has_counts()) throw ConfigError("the bootstrap needs period counts");
  const double n = pi.total_count();
  if (!(n > 0.0)) throw ConfigError("total sample size must be positive");
  const Eigen::MatrixXd m = design_matrix(rule, transform);
  const std::size_t d = std::size_t(m.cols());
  const double tau = config.tau_n ? *config.tau_n : default_tau_n(d, n);
  if (config.simplex_sum && tau > 1.0) throw ConfigError("tau_n > 1 leaves the constrained simplex empty");

  const std::size_t items = pi.items();
  const std::vector<double>& counts = pi.period_counts();
  const Eigen::VectorXd pi_vec = pi.vec();
  const VarianceWeights weights = variance_weights(pi_vec, items, counts);
  const StatisticResult observed = test_statistic(pi_vec, m, weights.inverse, tau, n, config.simplex_sum);

  TestResult res;
  res.t_n = observed.t_n;
  res.tau_n = tau;
  res.alpha = config.alpha;
  res.replications = config.replications;
  res.seed = config.seed;
  res.degenerate = observed.degenerate;
  res.p_tau = observed.p_tau;
  res.eta_hat = observed.eta_hat;
  res.bootstrap_statistics.assign(config.replications, 0.0);

  parallel_for(
      config.replications,
      [&](std::size_t l) {
        Rng rng = make_stream(config.seed, {0xB007ull, l});
        Eigen::VectorXd raw(pi_vec.size());
        for (std::size_t t = 0; t < counts.size(); ++t) {
          const auto seg = Eigen::seqN(Eigen::Index(t * items), Eigen::Index(items));
          raw(seg) = resample_row(pi_vec(seg), rounded_count(counts[t]), rng);
        }
        const VarianceWeights w_star = variance_weights(raw, items, counts);
        const Eigen::VectorXd centred = raw - pi_vec + observed.eta_hat;
        res.bootstrap_statistics[l] = test_statistic(centred, m, w_star.inverse, tau, n, config.simplex_sum).t_n;
      },
      config.threads);

  std::vector<double> sorted = res.bootstrap_statistics;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = std::size_t(std::ceil((1.0 - config.alpha) * double(config.replications)));
  res.critical_value = sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
  const auto exceed = std::count_if(sorted.begin(), sorted.end(), [&](double s) { return s >= res.t_n; });
  res.p_value = (1.0 + double(exceed)) / (double(config.replications) + 1.0);
  res.reject = res.t_n > res.critical_value;
  return res;
}

}  // namespace ras
