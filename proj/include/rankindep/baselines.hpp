#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankindep/core.hpp"

namespace rankindep {

enum class BaselineMethod { hsic, dcor_l1, dcor_l2 };

const char* to_string(BaselineMethod method) noexcept;
/// Accepts hsic, dcor-l1, dcor-l2 (underscores also accepted).
BaselineMethod parse_baseline_method(const std::string& text);

/// Largest N for which the O(N^2) kernel and distance matrices are built.
inline constexpr std::size_t kBaselineMaxN = 4000;

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::hsic;
  std::size_t k0 = 200;
  double alpha = 0.05;
  std::size_t jobs = 1;

  void validate() const;
};

/// Median pairwise Euclidean distance over distinct pairs; exact up to 2000
/// points, otherwise over a fixed-seed 2000-point subsample. Throws
/// DegenerateInput when the median is zero (e.g. all points identical).
double median_heuristic(const Matrix& points);

/// Unbiased HSIC with Gaussian kernels exp(-|x - x'|^2 / (2 b^2)):
///   [tr(K~L~) + 1'K~1 1'L~1 / ((N-1)(N-2)) - 2/(N-2) 1'K~L~1] / (N(N-3)),
/// K~ and L~ being the Gram matrices with zeroed diagonals. Requires N >= 4.
double hsic_unbiased(const PairedDataset& data, std::pair<double, double> bandwidths);
/// Bandwidths from the median heuristic on each block.
double hsic_unbiased(const PairedDataset& data);

enum class DistanceMetric { l1, l2 };

/// Empirical distance correlation sqrt(dCov^2 / sqrt(dVar_X^2 dVar_Y^2)) from
/// double-centered distance matrices. Throws DegenerateInput for a constant block.
double distance_correlation(const PairedDataset& data, DistanceMetric metric);

struct PermutationOutcome {
  BaselineMethod method = BaselineMethod::hsic;
  double statistic = 0.0;
  double p_value = 1.0;  ///< (1 + #{permuted >= observed}) / (K0 + 1)
  bool reject = false;   ///< p_value <= alpha
  double alpha = 0.05;
  std::size_t k0 = 0;
  std::vector<double> permuted;  ///< the K0 statistics, permutation k at index k
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// Statistic on the original pairing against K0 statistics on (X_i, Y_{pi_k(i)})
/// with uniform pi_k; permutation k draws from rng.substream(k).
PermutationOutcome permutation_test(const PairedDataset& data, const BaselineConfig& cfg, RngStream& rng);

}  // namespace rankindep
