#include "rankindep/testproc.hpp"

#include <algorithm>
#include <cmath>

#include "rankindep/parallel.hpp"
#include "rankindep/rankstats.hpp"

namespace rankindep {

SplitConfig TestConfig::split_for(std::size_t total) const {
  SplitConfig split = n_learn ? SplitConfig{*n_learn, p} : SplitConfig::from_fraction(total, learn_fraction, p);
  split.pre_shuffle = pre_shuffle;
  split.derangement = derangement;
  return split;
}

void TestConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("test: alpha must lie in (0, 1)");
  if (k_p < 1) throw InvalidArgument("test: k_p must be >= 1");
  if (jobs < 1) throw InvalidArgument("test: jobs must be >= 1");
}

double TestOutcome::mean_train_auc() const {
  if (per_replicate.empty()) return 0.5;
  double sum = 0.0;
  for (const auto& r : per_replicate) sum += r.train_auc;
  return sum / static_cast<double>(per_replicate.size());
}

nlohmann::json TestOutcome::to_json() const {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : per_replicate) {
    reps.push_back({{"statistic", r.statistic},
                    {"p_value", r.p_value},
                    {"reject", r.reject},
                    {"train_auc", r.train_auc},
                    {"test_auc", r.test_auc}});
  }
  return {{"statistic", statistic},
          {"threshold", threshold},
          {"p_value", p_value},
          {"reject", reject},
          {"alpha", alpha},
          {"phi", phi_label},
          {"null_mode", to_string(null_mode)},
          {"sizes", {{"n_minus", n_minus}, {"n_plus", n_plus}, {"test_minus", test_minus}, {"test_plus", test_plus}}},
          {"seed", seed},
          {"stream", stream},
          {"mean_train_auc", mean_train_auc()},
          {"per_replicate", reps}};
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median_of: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

namespace {

double scorer_auc(const ScoringModel& model, const Matrix& neg, const Matrix& pos) {
  const auto s_neg = model.score_rows(neg);
  const auto s_pos = model.score_rows(pos);
  return auc_pair_count(s_neg, s_pos);
}

TestOutcome run_impl(const PairedDataset& data, const TestConfig& cfg, const ScoringModel* oracle,
                     RngStream& rng) {
  cfg.validate();
  const SplitConfig split = cfg.split_for(data.n());
  split.validate(data.n());
  if (oracle != nullptr && oracle->dim() != data.dim()) {
    throw InvalidArgument("run_test_with_oracle: scorer expects " + std::to_string(oracle->dim()) +
                          " coordinates but the data has " + std::to_string(data.dim()));
  }
  if (oracle == nullptr) cfg.forest.validate(data.dim());

  TestOutcome out;
  out.alpha = cfg.alpha;
  out.n_minus = split.n_minus();
  out.n_plus = split.n_plus();
  out.test_minus = split.test_minus(data.n());
  out.test_plus = split.test_plus(data.n());
  out.phi_label = cfg.phi.label();
  out.null_mode = cfg.null_mode.value_or(choose_null_mode(out.test_minus, out.test_plus, cfg.phi));
  out.seed = rng.master_seed();
  out.stream = rng.stream_id();

  const auto null = cached_null(out.test_minus, out.test_plus, cfg.phi, out.null_mode, cfg.null_draws, cfg.null_seed);
  out.threshold = quantile(*null, cfg.alpha);

  out.per_replicate.resize(cfg.k_p);
  parallel_for(cfg.k_p, cfg.jobs, [&](std::size_t r) {
    RngStream rep = rng.substream(r);
    RngStream split_rng = rep.substream(0);
    RngStream fit_rng = rep.substream(1);
    RngStream tie_rng = rep.substream(2);

    const SplitShuffleResult s = split_shuffle(data, split, split_rng);
    const Matrix neg_train = data.joint_rows(s.neg_train.x_index, s.neg_train.y_index);
    const Matrix pos_train = data.joint_rows(s.pos_train.x_index, s.pos_train.y_index);

    ReplicateResult& res = out.per_replicate[r];
    std::optional<ScoringModel> fitted;
    if (oracle == nullptr) {
      fitted = cfg.learner == Learner::tree ? fit_ranking_tree(neg_train, pos_train, cfg.forest, fit_rng)
                                            : fit_ranking_forest(neg_train, pos_train, cfg.forest, fit_rng);
    }
    const ScoringModel& model = oracle != nullptr ? *oracle : *fitted;
    res.train_auc = scorer_auc(model, neg_train, pos_train);

    const auto s_neg = model.score_rows(data.joint_rows(s.neg_test.x_index, s.neg_test.y_index));
    const auto s_pos = model.score_rows(data.joint_rows(s.pos_test.x_index, s.pos_test.y_index));
    res.test_auc = auc_pair_count(s_neg, s_pos);
    const RankVector ranks = compute_ranks(s_neg, s_pos, tie_rng);
    res.ties_randomized = ranks.tie_policy_used;
    res.statistic = normalized_statistic(ranks, cfg.phi);
    res.p_value = p_value(*null, ranks, cfg.phi);
    res.reject = res.statistic > out.threshold + kStatisticTolerance;
  });

  std::vector<double> stats, ps;
  for (const auto& r : out.per_replicate) {
    stats.push_back(r.statistic);
    ps.push_back(r.p_value);
  }
  out.statistic = median_of(stats);
  out.p_value = median_of(ps);
  out.reject = out.p_value <= cfg.alpha;
  return out;
}

}  // namespace

TestOutcome run_test(const PairedDataset& data, const TestConfig& cfg, RngStream& rng) {
  return run_impl(data, cfg, nullptr, rng);
}

TestOutcome run_test_with_oracle(const PairedDataset& data, const TestConfig& cfg, const ScoringModel& oracle,
                                 RngStream& rng) {
  return run_impl(data, cfg, &oracle, rng);
}

}  // namespace rankindep
