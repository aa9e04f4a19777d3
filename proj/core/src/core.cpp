#include "ras/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ras/error.hpp"
#include "ras/lattice.hpp"

namespace ras {

Menu::Menu(std::vector<std::string> items, std::optional<std::size_t> outside_index)
    : items_(std::move(items)), outside_(outside_index) {
  if (items_.size() < 2) throw ConfigError("a menu needs at least two items");
  if (items_.size() > kMaxMenuSize) {
    throw ConfigError("menus larger than " + std::to_string(kMaxMenuSize) + " items are not supported");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : items_) {
    if (label.empty()) throw ConfigError("empty item label");
    if (!seen.insert(label).second) throw ConfigError("duplicate item label '" + label + "'");
  }
  if (outside_ && *outside_ >= items_.size()) throw ConfigError("outside option index out of range");
}

std::size_t Menu::index_of(const std::string& label) const {
  auto it = std::find(items_.begin(), items_.end(), label);
  if (it == items_.end()) throw ConfigError("unknown item '" + label + "'");
  return static_cast<std::size_t>(it - items_.begin());
}

std::size_t ConsiderationSet::size() const noexcept { return static_cast<std::size_t>(std::popcount(mask)); }

SetIndex::SetIndex(const Menu& menu, bool outside_mode)
    : n_(menu.size()), outside_mode_(outside_mode), outside_(menu.outside_index()) {
  if (outside_mode_ && !outside_) {
    throw ConfigError("outside-option mode requires the menu to declare an outside option");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(outside_mode_ && i == *outside_)) enumerated_items_.push_back(i);
  }
  bits_ = enumerated_items_.size();
  const Mask forced = outside_mode_ ? (Mask{1} << *outside_) : 0;
  const Mask first = outside_mode_ ? 0 : 1;
  const Mask last = Mask{1} << bits_;
  sets_.reserve(last - first);
  for (Mask r = first; r < last; ++r) {
    Mask m = forced;
    for (std::size_t j = 0; j < bits_; ++j) {
      if ((r >> j) & 1U) m |= Mask{1} << enumerated_items_[j];
    }
    sets_.push_back({m});
  }
}

std::optional<std::size_t> SetIndex::position(Mask mask) const {
  if (mask == 0 || (mask >> n_) != 0) return std::nullopt;
  Mask lattice = 0;
  if (outside_mode_) {
    const Mask out = Mask{1} << *outside_;
    if (!(mask & out)) return std::nullopt;
  }
  for (std::size_t j = 0; j < bits_; ++j) {
    if ((mask >> enumerated_items_[j]) & 1U) lattice |= Mask{1} << j;
  }
  return position_of_lattice(lattice);
}

std::vector<ConsiderationSet> enumerate_sets(const Menu& menu, bool outside_mode) {
  return SetIndex(menu, outside_mode).sets();
}

PreferenceOrdering::PreferenceOrdering(std::vector<std::size_t> rank) : rank_(std::move(rank)) {
  position_.assign(rank_.size(), rank_.size());
  for (std::size_t pos = 0; pos < rank_.size(); ++pos) {
    const std::size_t item = rank_[pos];
    if (item >= rank_.size() || position_[item] != rank_.size()) {
      throw ConfigError("ordering is not a permutation of the menu indices");
    }
    position_[item] = pos;
  }
}

std::string PreferenceOrdering::to_string(const Menu& menu) const {
  std::ostringstream os;
  for (std::size_t pos = 0; pos < rank_.size(); ++pos) {
    if (pos) os << " > ";
    os << menu.label(rank_[pos]);
  }
  return os.str();
}

PreferenceOrdering ordering_from_labels(const Menu& menu, const std::vector<std::string>& labels) {
  if (labels.size() != menu.size()) {
    throw ConfigError("ordering lists " + std::to_string(labels.size()) + " items, menu has " +
                      std::to_string(menu.size()));
  }
  std::vector<std::size_t> rank;
  rank.reserve(labels.size());
  for (const auto& l : labels) rank.push_back(menu.index_of(l));
  return PreferenceOrdering(std::move(rank));
}

OrderingSet::OrderingSet(std::vector<PreferenceOrdering> orderings) : orderings_(std::move(orderings)) {
  if (orderings_.empty()) throw ConfigError("ordering set is empty");
  const std::size_t n = orderings_.front().size();
  std::set<std::vector<std::size_t>> seen;
  for (const auto& o : orderings_) {
    if (o.size() != n) throw ConfigError("orderings have different lengths");
    if (!seen.insert(o.rank()).second) throw ConfigError("duplicate ordering in ordering set");
  }
}

OrderingSet OrderingSet::all(std::size_t n) {
  if (n < 1 || n > 8) throw ConfigError("full ordering enumeration is capped at 8 items");
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::vector<PreferenceOrdering> out;
  do {
    out.emplace_back(rank);
  } while (std::next_permutation(rank.begin(), rank.end()));
  return OrderingSet(std::move(out));
}

std::size_t best_in(const PreferenceOrdering& ordering, ConsiderationSet set) {
  if (set.empty()) throw DomainError("best_in called with an empty consideration set");
  for (std::size_t item : ordering.rank()) {
    if (set.contains(item)) return item;
  }
  throw DomainError("consideration set has no member in the ordering's menu");
}

ChoiceDataset::ChoiceDataset(Eigen::MatrixXd pi, std::vector<double> period_counts,
                             std::vector<std::string> period_labels)
    : pi_(std::move(pi)), counts_(std::move(period_counts)), labels_(std::move(period_labels)) {
  if (pi_.rows() < 1 || pi_.cols() < 2) throw DimensionError("choice data needs >= 1 period and >= 2 items");
  for (Eigen::Index t = 0; t < pi_.rows(); ++t) {
    for (Eigen::Index j = 0; j < pi_.cols(); ++j) {
      const double v = pi_(t, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DomainError("choice frequency outside [0,1] at period " + std::to_string(t + 1));
      }
    }
    if (std::abs(pi_.row(t).sum() - 1.0) > kRowSumTolerance) {
      throw DomainError("choice frequencies in period " + std::to_string(t + 1) + " do not sum to 1");
    }
  }
  if (!counts_.empty()) {
    if (counts_.size() != periods()) throw DimensionError("period_counts length differs from number of periods");
    for (double c : counts_) {
      if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("period counts must be positive");
    }
  }
  if (labels_.empty()) {
    for (std::size_t t = 0; t < periods(); ++t) labels_.push_back(std::to_string(t + 1));
  } else if (labels_.size() != periods()) {
    throw DimensionError("period_labels length differs from number of periods");
  }
}

double ChoiceDataset::total_count() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

Eigen::VectorXd ChoiceDataset::vec() const {
  Eigen::VectorXd out(pi_.size());
  Eigen::Index k = 0;
  for (Eigen::Index t = 0; t < pi_.rows(); ++t)
    for (Eigen::Index j = 0; j < pi_.cols(); ++j) out(k++) = pi_(t, j);
  return out;
}

AttentionRule::AttentionRule(Eigen::MatrixXd u, SetIndex sets, std::size_t preference_count)
    : u_(std::move(u)), sets_(std::move(sets)), d_pref_(preference_count) {
  if (d_pref_ == 0) throw DimensionError("attention rule needs at least one preference block");
  const auto d_c = static_cast<Eigen::Index>(sets_.size());
  if (u_.rows() < 1 || u_.cols() != d_c * static_cast<Eigen::Index>(d_pref_)) {
    throw DimensionError("attention matrix has " + std::to_string(u_.cols()) + " columns, expected " +
                         std::to_string(d_c * static_cast<Eigen::Index>(d_pref_)));
  }
  for (Eigen::Index t = 0; t < u_.rows(); ++t) {
    for (std::size_t i = 0; i < d_pref_; ++i) {
      auto block = u_.row(t).segment(static_cast<Eigen::Index>(i) * d_c, d_c);
      if ((block.array() < 0.0).any() || (block.array() > 1.0).any() || !block.allFinite()) {
        throw DomainError("attention probability outside [0,1]");
      }
      if (std::abs(block.sum() - 1.0) > kRowSumTolerance) {
        throw DomainError("attention block for preference " + std::to_string(i) + " at period " +
                          std::to_string(t + 1) + " does not sum to 1");
      }
    }
  }
}

Eigen::VectorXd AttentionRule::block_row(std::size_t pref, std::size_t t) const {
  const auto d_c = static_cast<Eigen::Index>(sets_.size());
  return u_.row(Eigen::Index(t)).segment(Eigen::Index(pref) * d_c, d_c).transpose();
}

PreferenceDistribution::PreferenceDistribution(Eigen::VectorXd p) : p_(std::move(p)) {
  if (p_.size() < 1) throw DimensionError("empty preference distribution");
  if ((p_.array() < 0.0).any() || !p_.allFinite()) throw DomainError("negative preference probability");
  if (std::abs(p_.sum() - 1.0) > kRowSumTolerance) throw DomainError("preference probabilities do not sum to 1");
}

PreferenceDistribution PreferenceDistribution::uniform(std::size_t d) {
  return PreferenceDistribution(Eigen::VectorXd::Constant(Eigen::Index(d), 1.0 / double(d)));
}

PreferenceDistribution PreferenceDistribution::degenerate(std::size_t d, std::size_t i) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(Eigen::Index(d));
  p(Eigen::Index(i)) = 1.0;
  return PreferenceDistribution(std::move(p));
}

double accumulated_attention(const AttentionRule& rule, std::size_t pref, std::size_t t, ConsiderationSet set) {
  if (pref >= rule.preference_count() || t >= rule.periods()) {
    throw DimensionError("accumulated_attention: preference or period index out of range");
  }
  const auto& idx = rule.set_index();
  if ((set.mask >> idx.menu_size()) != 0) throw DimensionError("set has members outside the menu");
  double total = 0.0;
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    if ((idx.set(pos).mask & ~set.mask) == 0) total += rule.mu(pref, t, pos);
  }
  return total;
}

MonotonicityReport check_time_monotonicity(const AttentionRule& rule, double tol) {
  MonotonicityReport report;
  const auto& idx = rule.set_index();
  const std::size_t full = idx.full_position();
  for (std::size_t i = 0; i < rule.preference_count(); ++i) {
    std::vector<std::vector<double>> alpha(rule.periods());
    for (std::size_t t = 0; t < rule.periods(); ++t) {
      const Eigen::VectorXd row = rule.block_row(i, t);
      alpha[t] = zeta_transform(std::span<const double>(row.data(), std::size_t(row.size())), idx);
      const double gap = std::abs(alpha[t][full] - 1.0);
      if (gap > tol) {
        report.violations.push_back(
            {MonotonicityViolation::Kind::kFullSetNotOne, i, idx.set(full), t, t, gap});
      }
    }
    // Sets outside the enumeration (outside mode, outside item missing) have
    // α = 0 at every period and cannot violate.
    for (std::size_t pos = 0; pos < full; ++pos) {
      for (std::size_t t = 0; t < rule.periods(); ++t) {
        for (std::size_t t2 = t + 1; t2 < rule.periods(); ++t2) {
          const double gap = alpha[t2][pos] - alpha[t][pos];
          if (gap > tol) {
            report.violations.push_back({MonotonicityViolation::Kind::kIncrease, i, idx.set(pos), t, t2, gap});
          }
        }
      }
    }
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace ras
