#include "rankindep/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "rankindep/nulldist.hpp"
#include "rankindep/ranking.hpp"
#include "rankindep/rankstats.hpp"

namespace rankindep {

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j = {{"c_constant", c_constant},
                      {"kappa_p", kappa_p},
                      {"first_term", first_term},
                      {"n_prime_condition", n_prime_condition},
                      {"n_condition", n_condition},
                      {"n_prime", n_prime},
                      {"p", p},
                      {"epsilon", epsilon},
                      {"delta", delta},
                      {"phi", phi_label}};
  j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
  return j;
}

BoundReport type2_first_term(std::size_t n_prime, double p, const ScoreGenFn& phi, double epsilon, double delta,
                             std::optional<double> alpha) {
  if (!(delta >= 0.0)) throw InvalidArgument("type2_first_term: delta must be >= 0");
  if (!(epsilon > delta)) throw InvalidArgument("type2_first_term: need epsilon > delta");
  if (n_prime < 1) throw InvalidArgument("type2_first_term: n' must be >= 1");
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw InvalidArgument("type2_first_term: alpha must lie in (0, 1)");
  BoundReport r;
  r.c_constant = level_constant(p, phi);
  r.kappa_p = std::min(p, 1.0 - p);
  const double gap = epsilon - delta;
  const auto np = static_cast<double>(n_prime);
  r.first_term = 18.0 * std::exp(-r.c_constant * np * gap * gap / 16.0);
  r.n_condition = np * p >= 1.0;
  if (alpha) r.n_prime_condition = np >= 4.0 * std::log(18.0 / *alpha) / (r.c_constant * gap * gap);
  r.n_prime = n_prime;
  r.p = p;
  r.epsilon = epsilon;
  r.delta = delta;
  r.alpha = alpha;
  r.phi_label = phi.label();
  return r;
}

EpsilonEstimate epsilon_for_model(const ModelSpec& model, const ScoreGenFn& phi, std::size_t m, RngStream& rng) {
  if (m < 2) throw InvalidArgument("epsilon_for_model: need m >= 2");
  const ScoringModel oracle = oracle_for_model(model);
  RngStream pos_rng = rng.substream(0);
  RngStream neg_rng = rng.substream(1);
  RngStream perm_rng = rng.substream(2);
  RngStream tie_rng = rng.substream(3);
  const PairedDataset pos = sample_model(model, m, pos_rng);
  const PairedDataset neg = sample_model(model, m, neg_rng);
  const auto pi = draw_uniform_permutation(m, perm_rng);
  std::vector<std::size_t> ident(m);
  for (std::size_t i = 0; i < m; ++i) ident[i] = i;
  const auto s_neg = oracle.score_rows(neg.joint_rows(ident, pi.mapping()));
  const auto s_pos = oracle.score_rows(pos.joint());

  const RankVector ranks = compute_ranks(s_neg, s_pos, tie_rng);
  EpsilonEstimate out;
  out.epsilon = normalized_statistic(ranks, phi);
  out.auc = auc_from_ranks(ranks, m, m);
  // Standard deviation of the per-positive terms over sqrt(m); it ignores the
  // negative correlation between ranks and so errs on the large side.
  double mean = 0.0, sq = 0.0;
  const double denom = static_cast<double>(ranks.n + 1);
  for (auto r : ranks.pos_ranks) mean += phi(r / denom);
  mean /= static_cast<double>(m);
  for (auto r : ranks.pos_ranks) sq += (phi(r / denom) - mean) * (phi(r / denom) - mean);
  out.stderr_ = std::sqrt(sq / static_cast<double>(m - 1) / static_cast<double>(m));
  return out;
}

}  // namespace rankindep
