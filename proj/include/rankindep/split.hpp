#pragma once

#include <cstddef>
#include <vector>

#include "rankindep/core.hpp"

namespace rankindep {

/// Learning size n and positive proportion p. The testing half has n' = N - n
/// rows; n_+ = floor(p n), n_- = n - n_+ and likewise for n'.
struct SplitConfig {
  std::size_t n_learn = 0;
  double p = 0.5;
  bool pre_shuffle = true;   ///< randomize row order before assigning blocks
  bool derangement = false;  ///< draw sigma, sigma' without fixed points

  std::size_t n_plus() const noexcept;
  std::size_t n_minus() const noexcept { return n_learn - n_plus(); }
  std::size_t test_size(std::size_t total) const noexcept { return total - n_learn; }
  std::size_t test_plus(std::size_t total) const noexcept;
  std::size_t test_minus(std::size_t total) const noexcept { return test_size(total) - test_plus(total); }

  /// Throws InvalidArgument naming the first violated size constraint.
  void validate(std::size_t total) const;

  /// n = round(fraction * total).
  static SplitConfig from_fraction(std::size_t total, double learn_fraction, double p);
};

/// Pairs (X_{x_index[k]}, Y_{y_index[k]}) referencing rows of the source dataset.
struct PairBlock {
  std::vector<std::size_t> x_index;
  std::vector<std::size_t> y_index;

  std::size_t size() const noexcept { return x_index.size(); }
};

/// The four samples of the split-and-shuffle construction. Negative blocks
/// pair X_i with Y drawn through sigma (resp. sigma') within the same block;
/// positive blocks keep the original pairing.
struct SplitShuffleResult {
  PairBlock neg_train;
  PairBlock pos_train;
  PairBlock neg_test;
  PairBlock pos_test;
  Permutation sigma;
  Permutation sigma_prime;
  std::vector<std::size_t> row_order;  ///< row_order[i] = source row placed at position i
};

SplitShuffleResult split_shuffle(const PairedDataset& data, const SplitConfig& cfg, RngStream& rng);

}  // namespace rankindep
