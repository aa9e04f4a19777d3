#include "ras/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ras/error.hpp"

namespace ras {

KMeans1d kmeans1d(const std::vector<double>& values, const std::vector<double>& weights, std::size_t k) {
  const std::size_t m = values.size();
  if (m == 0) throw ConfigError("k-means needs at least one value");
  if (weights.size() != m) throw DimensionError("k-means values and weights differ in length");
  if (k < 1) throw ConfigError("k-means needs k >= 1");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(values[i] > values[i - 1])) throw ConfigError("k-means values must be strictly ascending");
  }
  k = std::min(k, m);

  // Prefix sums of w, w·x, w·x² for O(1) segment costs.
  std::vector<double> sw(m + 1, 0.0), swx(m + 1, 0.0), swx2(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    sw[i + 1] = sw[i] + weights[i];
    swx[i + 1] = swx[i] + weights[i] * values[i];
    swx2[i + 1] = swx2[i] + weights[i] * values[i] * values[i];
  }
  auto cost = [&](std::size_t a, std::size_t b) {  // values[a..b)
    const double w = sw[b] - sw[a];
    if (w <= 0.0) return 0.0;
    const double s = swx[b] - swx[a];
    return std::max(0.0, (swx2[b] - swx2[a]) - s * s / w);
  };

  const double inf = std::numeric_limits<double>::infinity();
  // best[c][j]: optimal cost of the first j values in c clusters.
  std::vector<std::vector<double>> best(k + 1, std::vector<double>(m + 1, inf));
  std::vector<std::vector<std::size_t>> split(k + 1, std::vector<std::size_t>(m + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t c = 1; c <= k; ++c) {
    for (std::size_t j = c; j <= m; ++j) {
      for (std::size_t i = c - 1; i < j; ++i) {
        if (best[c - 1][i] == inf) continue;
        const double v = best[c - 1][i] + cost(i, j);
        if (v < best[c][j] - 1e-12 * std::max(1.0, std::abs(v))) {
          best[c][j] = v;
          split[c][j] = i;
        }
      }
    }
  }

  KMeans1d out;
  out.cost = best[k][m];
  out.start.assign(k, 0);
  std::size_t j = m;
  for (std::size_t c = k; c >= 1; --c) {
    out.start[c - 1] = split[c][j];
    j = split[c][j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t a = out.start[c];
    const std::size_t b = c + 1 < k ? out.start[c + 1] : m;
    out.centroids.push_back((swx[b] - swx[a]) / (sw[b] - sw[a]));
  }
  return out;
}

std::pair<TimeClustering, ChoiceDataset> cluster_times(const std::vector<RawObservation>& observations,
                                                       const Menu& menu, const ClusterOptions& options) {
  if (options.periods < 2) throw ConfigError("clustering needs at least two periods");
  if (observations.empty()) throw ConfigError("no observations to cluster");

  std::vector<std::size_t> choice(observations.size());
  bool has_zero = false;
  std::map<double, double> positive;  // distinct positive time -> count
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& o = observations[i];
    if (!std::isfinite(o.stopping_time) || o.stopping_time < 0.0) {
      throw ConfigError("stopping time of respondent " + o.respondent_id + " is negative or not finite");
    }
    choice[i] = menu.index_of(o.choice);
    if (o.stopping_time == 0.0) {
      has_zero = true;
    } else {
      positive[o.stopping_time] += 1.0;
    }
  }

  // Times that enter k-means, and the period offset of its first cluster.
  std::map<double, double> clustered = positive;
  std::size_t offset = 1;
  std::size_t k = options.periods - 1;
  if (!has_zero) {
    if (!options.allow_empty_first) {
      throw ConfigError("no zero-time observations for the first period (use --allow-empty-first)");
    }
    offset = 0;
    k = options.periods;
  }

  std::vector<double> values;
  std::vector<double> weights;
  for (const auto& [x, w] : clustered) {
    values.push_back(x);
    weights.push_back(w);
  }
  KMeans1d km;
  if (!values.empty()) km = kmeans1d(values, weights, k);
  const std::size_t periods = offset + km.start.size();

  TimeClustering tc;
  tc.lower.assign(periods, 0.0);
  tc.upper.assign(periods, 0.0);
  tc.centroids.assign(periods, 0.0);
  for (std::size_t c = 0; c < km.start.size(); ++c) {
    const std::size_t a = km.start[c];
    const std::size_t b = c + 1 < km.start.size() ? km.start[c + 1] : values.size();
    tc.lower[offset + c] = values[a];
    tc.upper[offset + c] = values[b - 1];
    tc.centroids[offset + c] = km.centroids[c];
  }

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(Eigen::Index(periods), Eigen::Index(menu.size()));
  tc.assignment.resize(observations.size());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const double x = observations[i].stopping_time;
    std::size_t p = 0;
    if (x > 0.0 || offset == 0) {
      const auto pos = std::size_t(std::lower_bound(values.begin(), values.end(), x) - values.begin());
      const auto c = std::size_t(std::upper_bound(km.start.begin(), km.start.end(), pos) - km.start.begin()) - 1;
      p = offset + c;
    }
    tc.assignment[i] = p;
    counts(Eigen::Index(p), Eigen::Index(choice[i])) += 1.0;
  }

  std::vector<double> n_t(periods);
  std::vector<std::string> labels(periods);
  Eigen::MatrixXd pi(counts.rows(), counts.cols());
  for (std::size_t t = 0; t < periods; ++t) {
    n_t[t] = counts.row(Eigen::Index(t)).sum();
    pi.row(Eigen::Index(t)) = counts.row(Eigen::Index(t)) / n_t[t];
    labels[t] = std::to_string(t + 1);
  }
  return {std::move(tc), ChoiceDataset(std::move(pi), std::move(n_t), std::move(labels))};
}

}  // namespace ras
