#include "ras_cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "ras/error.hpp"

namespace ras::cli {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw ConfigError(path.string() + " is empty");
  return rows;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("not a number in " + where + ": '" + s + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::vector<RawObservation> read_raw_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  const auto& header = rows.front();
  if (header.size() != 3 || header[0] != "respondent_id" || header[1] != "stopping_time" || header[2] != "choice") {
    throw ConfigError(path.string() + ": expected header respondent_id,stopping_time,choice");
  }
  std::vector<RawObservation> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw ConfigError(path.string() + ": line " + std::to_string(r + 1) + " needs 3 fields");
    out.push_back({rows[r][0], parse_double(rows[r][1], path.string()), rows[r][2]});
  }
  return out;
}

void write_raw_csv(const std::filesystem::path& path, const std::vector<RawObservation>& rows) {
  auto out = open_out(path);
  out << "respondent_id,stopping_time,choice\n";
  for (const auto& r : rows) out << r.respondent_id << ',' << r.stopping_time << ',' << r.choice << '\n';
}

PiTable read_pi_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "period") {
    throw ConfigError(path.string() + ": expected header period,<item labels> with at least two items");
  }
  std::vector<std::string> items(header.begin() + 1, header.end());
  Eigen::MatrixXd pi(Eigen::Index(rows.size() - 1), Eigen::Index(items.size()));
  std::vector<std::string> labels;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw ConfigError(path.string() + ": line " + std::to_string(r + 1) + " has the wrong number of fields");
    }
    labels.push_back(rows[r][0]);
    for (std::size_t j = 0; j < items.size(); ++j) {
      pi(Eigen::Index(r - 1), Eigen::Index(j)) = parse_double(rows[r][j + 1], path.string());
    }
  }
  if (pi.rows() == 0) throw ConfigError(path.string() + " has no periods");
  return {std::move(items), ChoiceDataset(std::move(pi), {}, std::move(labels))};
}

void write_pi_csv(const std::filesystem::path& path, const std::vector<std::string>& items, const ChoiceDataset& pi) {
  auto out = open_out(path);
  out << "period";
  for (const auto& i : items) out << ',' << i;
  out << '\n';
  for (std::size_t t = 0; t < pi.periods(); ++t) {
    out << (pi.period_labels().empty() ? std::to_string(t + 1) : pi.period_labels()[t]);
    for (std::size_t j = 0; j < pi.items(); ++j) out << ',' << pi(t, j);
    out << '\n';
  }
}

std::vector<double> read_counts_csv(const std::filesystem::path& path, const std::vector<std::string>& period_labels) {
  const auto rows = read_csv(path);
  if (rows.front().size() != 2 || rows.front()[0] != "period" || rows.front()[1] != "count") {
    throw ConfigError(path.string() + ": expected header period,count");
  }
  std::map<std::string, double> by_label;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) throw ConfigError(path.string() + ": line " + std::to_string(r + 1) + " needs 2 fields");
    by_label[rows[r][0]] = parse_double(rows[r][1], path.string());
  }
  std::vector<double> out;
  for (const auto& label : period_labels) {
    const auto it = by_label.find(label);
    if (it == by_label.end()) throw ConfigError(path.string() + ": no count for period " + label);
    out.push_back(it->second);
  }
  if (by_label.size() != period_labels.size()) throw ConfigError(path.string() + ": counts for unknown periods");
  return out;
}

void write_counts_csv(const std::filesystem::path& path, const ChoiceDataset& pi) {
  if (!pi.has_counts()) throw ConfigError("dataset has no period counts to write");
  auto out = open_out(path);
  out << "period,count\n";
  for (std::size_t t = 0; t < pi.periods(); ++t) {
    out << (pi.period_labels().empty() ? std::to_string(t + 1) : pi.period_labels()[t]) << ','
        << pi.period_counts()[t] << '\n';
  }
}

PiTable with_counts(const PiTable& table, std::vector<double> counts) {
  return {table.items, ChoiceDataset(table.data.pi(), std::move(counts), table.data.period_labels())};
}

LotterySet parse_lotteries(const nlohmann::json& j) {
  LotterySet set;
  if (!j.contains("lotteries") || !j["lotteries"].is_array()) throw ConfigError("lottery file needs a 'lotteries' array");
  for (const auto& l : j["lotteries"]) {
    Lottery lot;
    lot.label = l.at("label").get<std::string>();
    for (const auto& o : l.at("outcomes")) {
      if (!o.is_array() || o.size() != 2) throw ConfigError("lottery outcomes are [payoff, probability] pairs");
      lot.outcomes.emplace_back(o[0].get<double>(), o[1].get<double>());
    }
    lot.validate();
    set.lotteries.push_back(std::move(lot));
  }
  if (j.contains("outside") && !j["outside"].is_null()) set.outside = j["outside"].get<std::string>();
  return set;
}

LotterySet read_lotteries_json(const std::filesystem::path& path) {
  try {
    return parse_lotteries(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json lotteries_to_json(const LotterySet& set) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  for (const auto& l : set.lotteries) {
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& [x, p] : l.outcomes) outcomes.push_back({x, p});
    j["lotteries"].push_back({{"label", l.label}, {"outcomes", outcomes}});
  }
  if (!set.outside.empty()) j["outside"] = set.outside;
  return j;
}

LotterySet experiment_lotteries() {
  return {{
              {"l1", {{50, 0.5}, {0, 0.5}}},
              {"l2", {{30, 0.5}, {10, 0.5}}},
              {"l3", {{50, 0.25}, {30, 0.25}, {10, 0.25}, {0, 0.25}}},
              {"l4", {{50, 0.25}, {48, 0.2}, {14, 0.15}, {0, 0.4}}},
              {"l5", {{48, 0.2}, {30, 0.25}, {14, 0.15}, {10, 0.25}, {0, 0.15}}},
              {"lO", {{12, 1.0}}},
          },
          "lO"};
}

std::vector<std::vector<std::string>> read_orderings_json(const std::filesystem::path& path) {
  try {
    const auto j = read_json(path);
    std::vector<std::vector<std::string>> out;
    for (const auto& o : j.at("orderings")) out.push_back(o.get<std::vector<std::string>>());
    if (out.empty()) throw ConfigError(path.string() + ": no orderings");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string set_label(const ConsiderationSet& set, const Menu& menu) {
  std::string s = "{";
  bool first = true;
  for (std::size_t a = 0; a < menu.size(); ++a) {
    if (!set.contains(a)) continue;
    if (!first) s += ' ';
    s += menu.label(a);
    first = false;
  }
  return s + "}";
}

std::vector<std::string> ordering_labels(const PreferenceOrdering& ordering, const Menu& menu) {
  std::vector<std::string> out;
  for (std::size_t a : ordering.rank()) out.push_back(menu.label(a));
  return out;
}

void write_rule_csv(const std::filesystem::path& path, const AttentionRule& rule, const Menu& menu) {
  auto out = open_out(path);
  const SetIndex& sets = rule.set_index();
  out << "period";
  for (std::size_t i = 0; i < rule.preference_count(); ++i) {
    for (std::size_t k = 0; k < sets.size(); ++k) out << ",pref" << i + 1 << ':' << set_label(sets.set(k), menu);
  }
  out << '\n';
  for (std::size_t t = 0; t < rule.periods(); ++t) {
    out << t + 1;
    for (Eigen::Index c = 0; c < rule.u().cols(); ++c) out << ',' << rule.u()(Eigen::Index(t), c);
    out << '\n';
  }
}

nlohmann::json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(std::size_t(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[std::size_t(c)] = m(r, c);
    j.push_back(row);
  }
  return j;
}

std::vector<double> doubles_from_json(const nlohmann::json& j) {
  try {
    return j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("expected an array of numbers: ") + e.what());
  }
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a nonempty array of rows");
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd m(Eigen::Index(j.size()), Eigen::Index(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = doubles_from_json(j[r]);
    if (row.size() != cols) throw ConfigError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) m(Eigen::Index(r), Eigen::Index(c)) = row[c];
  }
  return m;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace ras::cli
