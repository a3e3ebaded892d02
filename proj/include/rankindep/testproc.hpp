#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankindep/core.hpp"
#include "rankindep/nulldist.hpp"
#include "rankindep/ranking.hpp"
#include "rankindep/scoregen.hpp"
#include "rankindep/split.hpp"

namespace rankindep {

enum class Learner { forest, tree };

struct TestConfig {
  /// Learning size n; when unset, n = round(learn_fraction * N).
  std::optional<std::size_t> n_learn;
  double learn_fraction = 0.8;
  double p = 0.5;
  bool pre_shuffle = true;
  bool derangement = false;

  ScoreGenFn phi = phi_mww();
  Learner learner = Learner::forest;
  ForestConfig forest;

  double alpha = 0.05;
  std::size_t k_p = 10;

  /// Unset: exhaustive when cheap (always for MWW/RTB), Monte Carlo otherwise.
  std::optional<NullMode> null_mode;
  std::size_t null_draws = 100000;
  std::uint64_t null_seed = 0x6e756c6cULL;

  std::size_t jobs = 1;

  SplitConfig split_for(std::size_t total) const;
  void validate() const;
};

struct ReplicateResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double train_auc = 0.5;  ///< AUC of the fitted scorer on its own training pairs
  double test_auc = 0.5;   ///< AUC on the scored testing pairs
  bool ties_randomized = false;
};

struct TestOutcome {
  double statistic = 0.0;  ///< median replicate statistic
  double threshold = 0.0;  ///< null quantile at alpha (same for every replicate)
  double p_value = 1.0;    ///< median replicate p-value
  bool reject = false;     ///< p_value <= alpha
  double alpha = 0.05;
  std::vector<ReplicateResult> per_replicate;

  std::size_t n_minus = 0, n_plus = 0, test_minus = 0, test_plus = 0;
  std::string phi_label;
  NullMode null_mode = NullMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  double mean_train_auc() const;
  nlohmann::json to_json() const;
};

/// Median of a nonempty sample (mean of the two middle values for even sizes).
double median_of(std::vector<double> values);

/// The full procedure: for each of k_p replicates draw a fresh split and
/// shuffle, fit the ranking learner on the learning half, rank the testing
/// half and compare its statistic with the null of (n'_-, n'_+, phi).
/// Replicate r uses rng.substream(r); results do not depend on cfg.jobs.
TestOutcome run_test(const PairedDataset& data, const TestConfig& cfg, RngStream& rng);

/// Same as run_test with a fixed scorer in place of the learning step.
TestOutcome run_test_with_oracle(const PairedDataset& data, const TestConfig& cfg, const ScoringModel& oracle,
                                 RngStream& rng);

}  // namespace rankindep
