#pragma once

// The linear form of the model, U·A·P = Π.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ras/core.hpp"

namespace ras {

// The 0/1 matrix A mapping consideration-set probabilities to choice
// probabilities conditional on preference.
//
// Rows follow AttentionRule columns (preference-major, then set position).
// Column j·d_pref + i is "item j chosen under ≻_i". Each row has exactly
// one 1, so only the chosen item per row is stored.
class ChoiceTransform {
 public:
  ChoiceTransform(std::size_t items, std::size_t preference_count, std::size_t set_count,
                  std::vector<std::size_t> chosen_item);

  std::size_t items() const noexcept { return n_; }
  std::size_t preference_count() const noexcept { return d_pref_; }
  std::size_t set_count() const noexcept { return d_c_; }
  std::size_t rows() const noexcept { return d_pref_ * d_c_; }
  std::size_t cols() const noexcept { return n_ * d_pref_; }

  std::size_t chosen_item(std::size_t pref, std::size_t set_pos) const { return chosen_[pref * d_c_ + set_pos]; }
  std::size_t one_column(std::size_t row) const { return chosen_.at(row) * d_pref_ + row / d_c_; }

  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t n_;
  std::size_t d_pref_;
  std::size_t d_c_;
  std::vector<std::size_t> chosen_;
};

ChoiceTransform build_choice_transform(const SetIndex& sets, const OrderingSet& orderings);

// P: (n·d_pref) × n, block b holds pᵀ in rows [b·d_pref, (b+1)·d_pref) of column b.
Eigen::MatrixXd block_diag(const PreferenceDistribution& p, std::size_t n);

// Π_≻ = U·A, the d_t × (n·d_pref) choice probabilities conditional on preference.
Eigen::MatrixXd choices_by_preference(const AttentionRule& rule, const ChoiceTransform& transform);

// Π = U·A·P.
ChoiceDataset predict_choices(const AttentionRule& rule, const ChoiceTransform& transform,
                              const PreferenceDistribution& p);

// M with M·p = vec(U·A·P) for every p; (d_t·n) × d_pref, rows in (period, item) row-major order.
Eigen::MatrixXd design_matrix(const AttentionRule& rule, const ChoiceTransform& transform);

}  // namespace ras
