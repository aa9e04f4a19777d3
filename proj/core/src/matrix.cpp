#include "ras/matrix.hpp"

#include "ras/error.hpp"

namespace ras {
namespace {

void check_compatible(const AttentionRule& rule, const ChoiceTransform& transform) {
  if (rule.preference_count() != transform.preference_count() || rule.set_count() != transform.set_count() ||
      rule.set_index().menu_size() != transform.items()) {
    throw DimensionError("attention rule and choice transform have incompatible dimensions");
  }
}

}  // namespace

ChoiceTransform::ChoiceTransform(std::size_t items, std::size_t preference_count, std::size_t set_count,
                                 std::vector<std::size_t> chosen_item)
    : n_(items), d_pref_(preference_count), d_c_(set_count), chosen_(std::move(chosen_item)) {
  if (chosen_.size() != d_pref_ * d_c_) throw DimensionError("choice transform row count mismatch");
  for (std::size_t j : chosen_) {
    if (j >= n_) throw DimensionError("choice transform refers to an item outside the menu");
  }
}

Eigen::MatrixXd ChoiceTransform::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(rows()), Eigen::Index(cols()));
  for (std::size_t r = 0; r < rows(); ++r) a(Eigen::Index(r), Eigen::Index(one_column(r))) = 1.0;
  return a;
}

ChoiceTransform build_choice_transform(const SetIndex& sets, const OrderingSet& orderings) {
  if (orderings.menu_size() != sets.menu_size()) throw DimensionError("orderings and menu differ in size");
  std::vector<std::size_t> chosen;
  chosen.reserve(orderings.size() * sets.size());
  for (const auto& ordering : orderings) {
    for (const auto& s : sets.sets()) chosen.push_back(best_in(ordering, s));
  }
  return ChoiceTransform(sets.menu_size(), orderings.size(), sets.size(), std::move(chosen));
}

Eigen::MatrixXd block_diag(const PreferenceDistribution& p, std::size_t n) {
  const auto d = Eigen::Index(p.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Eigen::Index(n) * d, Eigen::Index(n));
  for (Eigen::Index b = 0; b < Eigen::Index(n); ++b) out.block(b * d, b, d, 1) = p.p();
  return out;
}

Eigen::MatrixXd choices_by_preference(const AttentionRule& rule, const ChoiceTransform& transform) {
  check_compatible(rule, transform);
  const auto& u = rule.u();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(u.rows(), Eigen::Index(transform.cols()));
  for (std::size_t r = 0; r < transform.rows(); ++r) {
    out.col(Eigen::Index(transform.one_column(r))) += u.col(Eigen::Index(r));
  }
  return out;
}

ChoiceDataset predict_choices(const AttentionRule& rule, const ChoiceTransform& transform,
                              const PreferenceDistribution& p) {
  if (p.size() != transform.preference_count()) throw DimensionError("preference distribution length mismatch");
  Eigen::MatrixXd pi = choices_by_preference(rule, transform) * block_diag(p, transform.items());
  // Float round-off can leave entries a hair outside [0,1].
  pi = pi.cwiseMax(0.0).cwiseMin(1.0);
  return ChoiceDataset(std::move(pi));
}

Eigen::MatrixXd design_matrix(const AttentionRule& rule, const ChoiceTransform& transform) {
  check_compatible(rule, transform);
  const std::size_t n = transform.items();
  const std::size_t d_c = transform.set_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(rule.periods() * n), Eigen::Index(rule.preference_count()));
  for (std::size_t t = 0; t < rule.periods(); ++t) {
    for (std::size_t i = 0; i < rule.preference_count(); ++i) {
      for (std::size_t s = 0; s < d_c; ++s) {
        const double mu = rule.mu(i, t, s);
        if (mu != 0.0) m(Eigen::Index(t * n + transform.chosen_item(i, s)), Eigen::Index(i)) += mu;
      }
    }
  }
  return m;
}

}  // namespace ras
