#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankindep/core.hpp"
#include "rankindep/scoregen.hpp"

namespace rankindep {

/// Ranks of the positive scores in the pooled (negative + positive) sample.
struct RankVector {
  std::vector<std::uint32_t> pos_ranks;  ///< ascending, each in 1..n, distinct
  std::size_t n = 0;                     ///< pooled size n_- + n_+
  bool tie_policy_used = false;          ///< at least one tie group was randomized

  std::size_t n_plus() const noexcept { return pos_ranks.size(); }
  std::size_t n_minus() const noexcept { return n - pos_ranks.size(); }
};

/// Pooled ascending ranks. Exact ties are resolved by a uniformly random
/// ordering of each tied group, drawn from `tie_rng`; tie-free inputs do not
/// consume the stream. Throws InvalidArgument for an empty sample or a
/// non-finite score.
RankVector compute_ranks(std::span<const double> neg_scores, std::span<const double> pos_scores,
                         RngStream& tie_rng);

/// Builds a RankVector from explicit 1-based positive ranks.
RankVector make_rank_vector(std::vector<std::uint32_t> pos_ranks, std::size_t n);

/// Sum over positives of phi(R_i / (n + 1)).
double w_phi(const RankVector& ranks, const ScoreGenFn& phi);

/// (1/n_+) * w_phi - integral of phi over [0, 1].
double normalized_statistic(const RankVector& ranks, const ScoreGenFn& phi);

/// Fraction of (negative, positive) pairs with the positive ranked higher,
/// through the rank-sum identity. Exact for tie-free inputs.
double auc_from_ranks(const RankVector& ranks, std::size_t n_minus, std::size_t n_plus);

/// Direct O(n_- n_+) count: P(pos > neg) + 0.5 P(pos == neg).
double auc_pair_count(std::span<const double> neg_scores, std::span<const double> pos_scores);

}  // namespace rankindep
