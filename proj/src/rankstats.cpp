#include "rankindep/rankstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankindep {

RankVector compute_ranks(std::span<const double> neg_scores, std::span<const double> pos_scores,
                         RngStream& tie_rng) {
  if (neg_scores.empty() || pos_scores.empty()) {
    throw InvalidArgument("compute_ranks: both samples must be nonempty");
  }
  struct Entry {
    double score;
    bool positive;
  };
  std::vector<Entry> pooled;
  pooled.reserve(neg_scores.size() + pos_scores.size());
  for (double s : neg_scores) pooled.push_back({s, false});
  for (double s : pos_scores) pooled.push_back({s, true});
  for (const auto& e : pooled) {
    if (!std::isfinite(e.score)) throw InvalidArgument("compute_ranks: non-finite score");
  }
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Entry& a, const Entry& b) { return a.score < b.score; });

  RankVector out;
  out.n = pooled.size();
  out.pos_ranks.reserve(pos_scores.size());
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i + 1;
    while (j < pooled.size() && pooled[j].score == pooled[i].score) ++j;
    if (j - i > 1) {
      // Random order within the tied group: Fisher-Yates over its slots.
      out.tie_policy_used = true;
      for (std::size_t k = j - i - 1; k > 0; --k) {
        std::swap(pooled[i + k], pooled[i + tie_rng.uniform_index(k + 1)]);
      }
    }
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].positive) out.pos_ranks.push_back(static_cast<std::uint32_t>(k + 1));
    }
    i = j;
  }
  return out;
}

RankVector make_rank_vector(std::vector<std::uint32_t> pos_ranks, std::size_t n) {
  std::sort(pos_ranks.begin(), pos_ranks.end());
  if (pos_ranks.empty()) throw InvalidArgument("make_rank_vector: no positive ranks");
  if (pos_ranks.front() < 1 || pos_ranks.back() > n) throw InvalidArgument("make_rank_vector: rank out of 1..n");
  if (std::adjacent_find(pos_ranks.begin(), pos_ranks.end()) != pos_ranks.end()) {
    throw InvalidArgument("make_rank_vector: duplicate rank");
  }
  RankVector out;
  out.pos_ranks = std::move(pos_ranks);
  out.n = n;
  return out;
}

double w_phi(const RankVector& ranks, const ScoreGenFn& phi) {
  const double denom = static_cast<double>(ranks.n + 1);
  double sum = 0.0;
  for (auto r : ranks.pos_ranks) sum += phi(static_cast<double>(r) / denom);
  return sum;
}

double normalized_statistic(const RankVector& ranks, const ScoreGenFn& phi) {
  if (ranks.pos_ranks.empty()) throw InvalidArgument("normalized_statistic: n_+ must be >= 1");
  return w_phi(ranks, phi) / static_cast<double>(ranks.n_plus()) - phi.integral_0_1();
}

double auc_from_ranks(const RankVector& ranks, std::size_t n_minus, std::size_t n_plus) {
  if (n_minus == 0 || n_plus == 0) throw InvalidArgument("auc_from_ranks: empty class");
  if (n_minus + n_plus != ranks.n || n_plus != ranks.n_plus()) {
    throw InvalidArgument("auc_from_ranks: sizes do not match the rank vector");
  }
  std::uint64_t rank_sum = 0;
  for (auto r : ranks.pos_ranks) rank_sum += r;
  const std::uint64_t concordant = rank_sum - n_plus * (n_plus + 1) / 2;
  return static_cast<double>(concordant) / (static_cast<double>(n_minus) * static_cast<double>(n_plus));
}

double auc_pair_count(std::span<const double> neg_scores, std::span<const double> pos_scores) {
  if (neg_scores.empty() || pos_scores.empty()) throw InvalidArgument("auc_pair_count: empty class");
  std::uint64_t twice = 0;
  for (double p : pos_scores) {
    for (double q : neg_scores) twice += p > q ? 2 : (p == q ? 1 : 0);
  }
  return static_cast<double>(twice) / 2.0 /
         (static_cast<double>(neg_scores.size()) * static_cast<double>(pos_scores.size()));
}

}  // namespace rankindep
