#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankindep/core.hpp"
#include "rankindep/datagen.hpp"
#include "rankindep/ranking.hpp"

namespace rankindep {

/// Piecewise-linear PP curve (FPR, TPR), sorted, from (0,0) to (1,1).
struct RocCurve {
  std::vector<std::pair<double, double>> points;
  double auc = 0.5;

  /// Linear interpolation; at a vertical jump returns the upper value.
  double tpr_at(double fpr) const;
  /// Values of the curve on k equally spaced abscissae 0, 1/(k-1), ..., 1.
  std::vector<double> grid(std::size_t k = 512) const;
  /// sup over the grid of |tpr(u) - u|.
  double sup_distance_to_diagonal(std::size_t k = 512) const;
};

/// Sweeps thresholds from high to low; tied scores across classes produce a
/// diagonal segment, so the trapezoid area equals P(pos > neg) + P(pos = neg)/2.
RocCurve empirical_roc(std::span<const double> neg_scores, std::span<const double> pos_scores);

/// Positives: m fresh joint draws. Negatives: m fresh joint draws with the Y
/// block shuffled, i.e. exact draws from the product of the marginals.
RocCurve oracle_roc_monte_carlo(const ModelSpec& model, const ScoringModel& scorer, std::size_t m, RngStream& rng);

struct AucTvCheck {
  double lhs = 0.0;        ///< Monte Carlo AUC of the oracle minus 1/2
  double lhs_stderr = 0.0; ///< standard error of the AUC estimate
  double rhs = 0.0;        ///< int int |rho (2x-1)(2y-1)| dx dy
  double ratio() const { return rhs == 0.0 ? 0.0 : lhs / rhs; }
};

/// Both sides of the AUC / likelihood-ratio identity for the bilinear copula.
AucTvCheck check_auc_tv_gumbel(double rho, std::size_t m, RngStream& rng);

/// fpr,tpr rows on the 512-point grid.
void write_roc_csv(const RocCurve& curve, std::ostream& out, std::size_t k = 512);

}  // namespace rankindep
