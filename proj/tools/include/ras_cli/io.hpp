#pragma once

// File formats used by the ras command-line tool.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ras/clustering.hpp"
#include "ras/core.hpp"
#include "ras/crra.hpp"

namespace ras::cli {

inline constexpr int kSchemaVersion = 1;

struct PiTable {
  std::vector<std::string> items;
  ChoiceDataset data;
};

// `respondent_id,stopping_time,choice` with a header row.
std::vector<RawObservation> read_raw_csv(const std::filesystem::path& path);
void write_raw_csv(const std::filesystem::path& path, const std::vector<RawObservation>& rows);

// Header `period,<item labels>`, one row per period.
PiTable read_pi_csv(const std::filesystem::path& path);
void write_pi_csv(const std::filesystem::path& path, const std::vector<std::string>& items, const ChoiceDataset& pi);

// `period,count`; counts are matched to Π rows by period label.
std::vector<double> read_counts_csv(const std::filesystem::path& path, const std::vector<std::string>& period_labels);
void write_counts_csv(const std::filesystem::path& path, const ChoiceDataset& pi);

// Π with the counts attached.
PiTable with_counts(const PiTable& table, std::vector<double> counts);

struct LotterySet {
  std::vector<Lottery> lotteries;
  std::string outside;  // empty when there is none
};

// {"lotteries": [{"label": ..., "outcomes": [[payoff, prob], ...]}], "outside": label}
LotterySet read_lotteries_json(const std::filesystem::path& path);
LotterySet parse_lotteries(const nlohmann::json& j);
nlohmann::json lotteries_to_json(const LotterySet& set);
// The five lotteries and the sure outside option of the lottery experiment.
LotterySet experiment_lotteries();

// {"orderings": [["a", "b", ...], ...]}, labels best first.
std::vector<std::vector<std::string>> read_orderings_json(const std::filesystem::path& path);

// One row per period, columns `pref<i>:<set>` with sets written as `{a,b}`.
void write_rule_csv(const std::filesystem::path& path, const AttentionRule& rule, const Menu& menu);

std::string set_label(const ConsiderationSet& set, const Menu& menu);
std::vector<std::string> ordering_labels(const PreferenceOrdering& ordering, const Menu& menu);

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
std::vector<double> doubles_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace ras::cli
