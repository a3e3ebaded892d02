#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rankindep/core.hpp"
#include "rankindep/rankstats.hpp"
#include "rankindep/scoregen.hpp"

namespace rankindep {

enum class NullMode { exhaustive, monte_carlo };

const char* to_string(NullMode mode) noexcept;
NullMode parse_null_mode(const std::string& text);

/// Largest C(n, n_+) that the enumerating builder will walk.
inline constexpr double kExhaustiveBudget = 1e7;
/// Largest rank-sum table update count (about n n_+ max_sum / 2) for the
/// lattice tabulation; n' = 400 at p = 1/2 fits, n' = 1000 does not.
inline constexpr double kLatticeBudget = 5e9;
/// Statistic values closer than this are treated as the same atom. Observed
/// statistics and tabulated support values are summed in different orders.
inline constexpr double kStatisticTolerance = 1e-9;

/// Law of the normalized statistic (1/n_+) sum phi(R_i/(n+1)) - int phi when
/// the positive ranks are a uniform size-n_+ subset of {1..n}.
///
/// Stored as sorted support atoms with nonnegative weights. For the exhaustive
/// mode the weights are subset counts or probabilities; for Monte Carlo they are
/// draw counts.
class NullDistribution {
 public:
  NullDistribution(std::size_t n_minus, std::size_t n_plus, std::string phi_label, NullMode mode,
                   std::size_t m_draws, std::uint64_t seed, std::vector<double> support,
                   std::vector<double> weights);

  std::size_t n_minus() const noexcept { return n_minus_; }
  std::size_t n_plus() const noexcept { return n_plus_; }
  const std::string& phi_label() const noexcept { return phi_label_; }
  NullMode mode() const noexcept { return mode_; }
  std::size_t m_draws() const noexcept { return m_draws_; }
  std::uint64_t seed() const noexcept { return seed_; }

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_weight() const noexcept { return tail_weight_.front(); }
  std::vector<double> probabilities() const;

  /// P(S <= t).
  double cdf(double t) const;
  /// P(S > t + tol).
  double prob_greater(double t) const;
  /// P(S >= t - tol).
  double prob_at_least(double t) const;
  double mean() const;

 private:
  std::size_t first_at_least(double t) const;

  std::size_t n_minus_;
  std::size_t n_plus_;
  std::string phi_label_;
  NullMode mode_;
  std::size_t m_draws_;
  std::uint64_t seed_;
  std::vector<double> support_;
  std::vector<double> weights_;
  std::vector<double> tail_weight_;  // tail_weight_[i] = sum of weights_[i..]; size + 1
};

/// Exhaustive: the exact law. Rank-lattice phi (MWW, RTB) is tabulated over
/// rank sums (BudgetExceeded past kLatticeBudget); other phi are enumerated
/// subset by subset and throw BudgetExceeded when C(n, n_+) > kExhaustiveBudget.
/// Monte Carlo: `m_draws` (>= 1000) uniform subsets from `rng`.
NullDistribution build_null(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi, NullMode mode,
                            std::size_t m_draws, RngStream& rng);

/// Subset-by-subset enumeration regardless of phi (budget still enforced).
NullDistribution build_null_by_enumeration(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi);

/// Smallest support value t with P(S > t) <= alpha.
double quantile(const NullDistribution& dist, double alpha);

/// P(S >= observed); Monte Carlo tables use (1 + #{draws >= observed}) / (M + 1).
double p_value(const NullDistribution& dist, double observed);

/// As above, after checking the table matches the rank vector's sizes and phi.
double p_value(const NullDistribution& dist, const RankVector& ranks, const ScoreGenFn& phi);

/// C = min(p / |phi|^2, 1 / (p |phi'|^2), 1 / ((1-p) |phi'|^2)) / 8.
/// Throws UnsupportedPhi for phi without a bounded derivative.
double level_constant(double p, const ScoreGenFn& phi);

/// sqrt(log(18 / alpha) / (C n)), the closed-form bound on the (1-alpha)
/// quantile for pooled size n and positive proportion p.
double quantile_upper_bound(double alpha, std::size_t n, double p, const ScoreGenFn& phi);

/// CSV with columns value,probability.
void write_null_csv(const NullDistribution& dist, std::ostream& out);

/// Process-wide table cache keyed by (n_-, n_+, phi, mode, M, seed). When the
/// environment variable RANKINDEP_CACHE_DIR is set, tables are also persisted
/// there as CSV files with a one-line JSON header.
std::shared_ptr<const NullDistribution> cached_null(std::size_t n_minus, std::size_t n_plus,
                                                    const ScoreGenFn& phi, NullMode mode,
                                                    std::size_t m_draws, std::uint64_t seed);

/// Reads a cache file written by cached_null. Throws InvalidArgument on a
/// malformed file.
NullDistribution read_null_table(const std::string& path);
void write_null_table(const NullDistribution& dist, const std::string& path);

/// Exhaustive when exact tabulation is cheap, Monte Carlo otherwise.
NullMode choose_null_mode(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi);

}  // namespace rankindep
