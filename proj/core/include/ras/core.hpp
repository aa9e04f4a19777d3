#pragma once

// Domain types for the random-attention-span model: menus, consideration
// sets, strict orderings, stochastic choice data and attention rules.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ras {

using Mask = std::uint64_t;

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr std::size_t kMaxMenuSize = 16;

class Menu {
 public:
  Menu(std::vector<std::string> items, std::optional<std::size_t> outside_index = std::nullopt);

  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<std::string>& items() const noexcept { return items_; }
  const std::string& label(std::size_t i) const { return items_.at(i); }
  std::optional<std::size_t> outside_index() const noexcept { return outside_; }
  bool has_outside() const noexcept { return outside_.has_value(); }

  // Index of `label`; throws ConfigError when absent.
  std::size_t index_of(const std::string& label) const;
  Mask full_mask() const noexcept { return (Mask{1} << items_.size()) - 1; }

 private:
  std::vector<std::string> items_;
  std::optional<std::size_t> outside_;
};

struct ConsiderationSet {
  Mask mask = 0;

  bool contains(std::size_t item) const noexcept { return (mask >> item) & 1U; }
  bool empty() const noexcept { return mask == 0; }
  std::size_t size() const noexcept;
  bool operator==(const ConsiderationSet&) const = default;
};

// Canonical enumeration of the admissible consideration sets of a menu.
//
// Positions are ascending bitmasks over the enumerated items. In outside
// mode the outside item is forced into every set and excluded from the
// enumerated bits, so position r corresponds to the subset r of the other
// n-1 items (position 0 is {outside}). Otherwise position r holds the set
// with bitmask r+1. In both modes position order is a linear extension of
// set inclusion, and the last position is the full menu.
class SetIndex {
 public:
  SetIndex(const Menu& menu, bool outside_mode);

  std::size_t menu_size() const noexcept { return n_; }
  bool outside_mode() const noexcept { return outside_mode_; }
  std::optional<std::size_t> outside_index() const noexcept { return outside_; }
  std::size_t size() const noexcept { return sets_.size(); }
  std::size_t lattice_bits() const noexcept { return bits_; }
  const std::vector<ConsiderationSet>& sets() const noexcept { return sets_; }
  const ConsiderationSet& set(std::size_t pos) const { return sets_.at(pos); }

  // Position of a set in the enumeration, or nullopt if it is not admissible.
  std::optional<std::size_t> position(Mask mask) const;
  std::size_t full_position() const noexcept { return sets_.size() - 1; }

  // Compressed lattice coordinate of position `pos` (bit j <-> j-th enumerated item).
  Mask lattice_mask(std::size_t pos) const noexcept { return outside_mode_ ? Mask(pos) : Mask(pos + 1); }
  std::size_t position_of_lattice(Mask lattice) const noexcept {
    return outside_mode_ ? std::size_t(lattice) : std::size_t(lattice) - 1;
  }

  bool operator==(const SetIndex& other) const {
    return n_ == other.n_ && outside_mode_ == other.outside_mode_ && outside_ == other.outside_;
  }

 private:
  std::size_t n_;
  bool outside_mode_;
  std::optional<std::size_t> outside_;
  std::size_t bits_;
  std::vector<std::size_t> enumerated_items_;
  std::vector<ConsiderationSet> sets_;
};

std::vector<ConsiderationSet> enumerate_sets(const Menu& menu, bool outside_mode);

class PreferenceOrdering {
 public:
  // `rank` lists menu indices best-first.
  explicit PreferenceOrdering(std::vector<std::size_t> rank);

  std::size_t size() const noexcept { return rank_.size(); }
  const std::vector<std::size_t>& rank() const noexcept { return rank_; }
  std::size_t item_at(std::size_t position) const { return rank_.at(position); }
  // 0 = best.
  std::size_t position_of(std::size_t item) const { return position_.at(item); }
  bool prefers(std::size_t a, std::size_t b) const { return position_of(a) < position_of(b); }

  std::string to_string(const Menu& menu) const;
  bool operator==(const PreferenceOrdering& other) const { return rank_ == other.rank_; }

 private:
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> position_;
};

PreferenceOrdering ordering_from_labels(const Menu& menu, const std::vector<std::string>& labels);

class OrderingSet {
 public:
  explicit OrderingSet(std::vector<PreferenceOrdering> orderings);

  // All n! orderings in lexicographic order of their rank vectors.
  static OrderingSet all(std::size_t n);

  std::size_t size() const noexcept { return orderings_.size(); }
  std::size_t menu_size() const noexcept { return orderings_.front().size(); }
  const PreferenceOrdering& operator[](std::size_t i) const { return orderings_.at(i); }
  const std::vector<PreferenceOrdering>& orderings() const noexcept { return orderings_; }
  auto begin() const { return orderings_.begin(); }
  auto end() const { return orderings_.end(); }

 private:
  std::vector<PreferenceOrdering> orderings_;
};

// Member of `set` ranked highest by `ordering`.
std::size_t best_in(const PreferenceOrdering& ordering, ConsiderationSet set);

// Π: rows are stopping-time periods, columns menu items.
class ChoiceDataset {
 public:
  explicit ChoiceDataset(Eigen::MatrixXd pi, std::vector<double> period_counts = {},
                         std::vector<std::string> period_labels = {});

  std::size_t periods() const noexcept { return static_cast<std::size_t>(pi_.rows()); }
  std::size_t items() const noexcept { return static_cast<std::size_t>(pi_.cols()); }
  const Eigen::MatrixXd& pi() const noexcept { return pi_; }
  double operator()(std::size_t t, std::size_t item) const { return pi_(Eigen::Index(t), Eigen::Index(item)); }
  bool has_counts() const noexcept { return !counts_.empty(); }
  const std::vector<double>& period_counts() const noexcept { return counts_; }
  double total_count() const noexcept;
  const std::vector<std::string>& period_labels() const noexcept { return labels_; }

  // Row-major (period, item) flattening.
  Eigen::VectorXd vec() const;

 private:
  Eigen::MatrixXd pi_;
  std::vector<double> counts_;
  std::vector<std::string> labels_;
};

// μ(A | t, ≻_i) stacked as U = [U_≻1 ... U_≻d], each block d_t × d_c.
class AttentionRule {
 public:
  AttentionRule(Eigen::MatrixXd u, SetIndex sets, std::size_t preference_count);

  std::size_t periods() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  std::size_t preference_count() const noexcept { return d_pref_; }
  std::size_t set_count() const noexcept { return sets_.size(); }
  const SetIndex& set_index() const noexcept { return sets_; }
  const Eigen::MatrixXd& u() const noexcept { return u_; }

  double mu(std::size_t pref, std::size_t t, std::size_t set_pos) const {
    return u_(Eigen::Index(t), Eigen::Index(pref * sets_.size() + set_pos));
  }
  // Row t of preference block `pref` (length d_c).
  Eigen::VectorXd block_row(std::size_t pref, std::size_t t) const;

 private:
  Eigen::MatrixXd u_;
  SetIndex sets_;
  std::size_t d_pref_;
};

class PreferenceDistribution {
 public:
  explicit PreferenceDistribution(Eigen::VectorXd p);

  static PreferenceDistribution uniform(std::size_t d);
  static PreferenceDistribution degenerate(std::size_t d, std::size_t i);

  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
  const Eigen::VectorXd& p() const noexcept { return p_; }
  double operator[](std::size_t i) const { return p_(Eigen::Index(i)); }

 private:
  Eigen::VectorXd p_;
};

// α(A | t, ≻_i) = Σ_{B ⊆ A} μ(B | t, ≻_i). `set` may be any subset of the
// menu; inadmissible members of the sum contribute zero.
double accumulated_attention(const AttentionRule& rule, std::size_t pref, std::size_t t, ConsiderationSet set);

struct MonotonicityViolation {
  enum class Kind { kIncrease, kFullSetNotOne };
  Kind kind = Kind::kIncrease;
  std::size_t pref = 0;
  ConsiderationSet set;
  std::size_t t = 0;
  std::size_t t_later = 0;
  // α(A|t') - α(A|t) for increases, |α(S|t) - 1| otherwise.
  double gap = 0.0;
};

struct MonotonicityReport {
  bool pass = true;
  std::vector<MonotonicityViolation> violations;
};

inline constexpr double kMonotonicityTolerance = 1e-9;

// Exhaustive scan: every preference, every proper subset, every t < t'.
MonotonicityReport check_time_monotonicity(const AttentionRule& rule, double tol = kMonotonicityTolerance);

}  // namespace ras
