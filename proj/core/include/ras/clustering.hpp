#pragma once

// Turning (respondent, stopping time, choice) records into period-wise
// choice frequencies.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ras/core.hpp"

namespace ras {

struct RawObservation {
  std::string respondent_id;
  double stopping_time = 0.0;  // seconds
  std::string choice;          // menu label
};

struct KMeans1d {
  std::vector<std::size_t> start;  // first index (into the sorted distinct values) of each cluster
  std::vector<double> centroids;   // ascending
  double cost = 0.0;               // weighted within-cluster sum of squares
};

// Exact weighted 1-D k-means on ascending distinct values. Returns
// min(k, values.size()) clusters; ties between partitions of equal cost go
// to the partition with earlier boundaries.
KMeans1d kmeans1d(const std::vector<double>& values, const std::vector<double>& weights, std::size_t k);

struct TimeClustering {
  std::vector<double> lower;      // smallest time in each period
  std::vector<double> upper;      // largest time in each period
  std::vector<double> centroids;  // mean time in each period
  std::vector<std::size_t> assignment;  // period of each observation, in input order
};

struct ClusterOptions {
  std::size_t periods = 6;
  // Without zero-time observations, cluster every time into `periods` groups
  // instead of failing.
  bool allow_empty_first = false;
};

// Period 1 holds exactly the zero-time observations; positive times are
// split into periods − 1 contiguous groups by exact k-means (fewer when there
// are fewer distinct positive times).
std::pair<TimeClustering, ChoiceDataset> cluster_times(const std::vector<RawObservation>& observations,
                                                       const Menu& menu, const ClusterOptions& options = {});

}  // namespace ras
