#include "rankindep/roc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rankindep {

double RocCurve::tpr_at(double fpr) const {
  if (points.empty()) throw InvalidArgument("RocCurve: empty curve");
  fpr = std::clamp(fpr, 0.0, 1.0);
  auto it = std::upper_bound(points.begin(), points.end(), fpr,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  if (it == points.begin()) return points.front().second;
  const auto& lo = *(it - 1);
  if (lo.first == fpr || it == points.end()) return lo.second;
  const auto& hi = *it;
  const double t = (fpr - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

std::vector<double> RocCurve::grid(std::size_t k) const {
  if (k < 2) throw InvalidArgument("RocCurve::grid: need at least 2 abscissae");
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = tpr_at(static_cast<double>(i) / static_cast<double>(k - 1));
  return out;
}

double RocCurve::sup_distance_to_diagonal(std::size_t k) const {
  const auto g = grid(k);
  double sup = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sup = std::max(sup, std::abs(g[i] - static_cast<double>(i) / static_cast<double>(k - 1)));
  }
  return sup;
}

RocCurve empirical_roc(std::span<const double> neg_scores, std::span<const double> pos_scores) {
  if (neg_scores.empty() || pos_scores.empty()) throw InvalidArgument("empirical_roc: both samples must be nonempty");
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(neg_scores.size() + pos_scores.size());
  for (double s : neg_scores) pooled.emplace_back(s, false);
  for (double s : pos_scores) pooled.emplace_back(s, true);
  for (const auto& p : pooled) {
    if (std::isnan(p.first)) throw InvalidArgument("empirical_roc: NaN score");
  }
  std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  const auto nm = static_cast<double>(neg_scores.size());
  const auto np = static_cast<double>(pos_scores.size());
  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::size_t fp = 0, tp = 0;
  double area2 = 0.0;  // twice the area, in units of 1/(nm np)
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i, dfp = 0, dtp = 0;
    for (; j < pooled.size() && pooled[j].first == pooled[i].first; ++j) {
      if (pooled[j].second) {
        ++dtp;
      } else {
        ++dfp;
      }
    }
    area2 += static_cast<double>(dfp) * static_cast<double>(2 * tp + dtp);
    fp += dfp;
    tp += dtp;
    curve.points.emplace_back(static_cast<double>(fp) / nm, static_cast<double>(tp) / np);
    i = j;
  }
  curve.points.back() = {1.0, 1.0};
  curve.auc = area2 / (2.0 * nm * np);
  return curve;
}

namespace {

void check_m(std::size_t m) {
  if (m < 2) throw InvalidArgument("need m >= 2 Monte Carlo draws");
}

std::pair<std::vector<double>, std::vector<double>> oracle_scores(const ModelSpec& model, const ScoringModel& scorer,
                                                                  std::size_t m, RngStream& rng) {
  if (scorer.dim() != model.d()) throw InvalidArgument("oracle ROC: scorer dimension does not match the model");
  RngStream pos_rng = rng.substream(0);
  RngStream neg_rng = rng.substream(1);
  RngStream perm_rng = rng.substream(2);
  const PairedDataset pos = sample_model(model, m, pos_rng);
  const PairedDataset neg = sample_model(model, m, neg_rng);
  const auto pi = draw_uniform_permutation(m, perm_rng);
  std::vector<std::size_t> ident(m);
  for (std::size_t i = 0; i < m; ++i) ident[i] = i;
  return {scorer.score_rows(neg.joint_rows(ident, pi.mapping())), scorer.score_rows(pos.joint())};
}

}  // namespace

RocCurve oracle_roc_monte_carlo(const ModelSpec& model, const ScoringModel& scorer, std::size_t m, RngStream& rng) {
  check_m(m);
  const auto [neg, pos] = oracle_scores(model, scorer, m, rng);
  return empirical_roc(neg, pos);
}

AucTvCheck check_auc_tv_gumbel(double rho, std::size_t m, RngStream& rng) {
  if (!(std::abs(rho) <= 1.0)) throw InvalidArgument("check_auc_tv_gumbel: rho must lie in [-1, 1]");
  check_m(m);
  const ModelSpec spec = ModelSpec::make(ModelId::GUMBEL, 2, rho);
  const auto [neg, pos] = oracle_scores(spec, oracle_gumbel_scorer(rho), m, rng);

  AucTvCheck out;
  out.lhs = empirical_roc(neg, pos).auc - 0.5;

  // DeLong variance: placement values of each sample within the other.
  std::vector<double> sn(neg), sp(pos);
  std::sort(sn.begin(), sn.end());
  std::sort(sp.begin(), sp.end());
  auto placement = [](const std::vector<double>& sorted, double v) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
    return (static_cast<double>(lo) + 0.5 * static_cast<double>(hi - lo)) / static_cast<double>(sorted.size());
  };
  auto variance = [](const std::vector<double>& v) {
    double mean = 0.0, sq = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double x : v) sq += (x - mean) * (x - mean);
    return sq / static_cast<double>(v.size() - 1);
  };
  std::vector<double> v10, v01;
  for (double s : pos) v10.push_back(placement(sn, s));
  for (double s : neg) v01.push_back(1.0 - placement(sp, s));
  out.lhs_stderr = std::sqrt(variance(v10) / static_cast<double>(pos.size()) + variance(v01) / static_cast<double>(neg.size()));

  // Midpoint rule on a separable grid; |2x - 1| is linear on each cell when
  // the kink at 1/2 is a cell boundary, so the rule is exact up to rounding.
  constexpr std::size_t cells = 1000;
  double one_d = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / cells;
    one_d += std::abs(2.0 * x - 1.0) / cells;
  }
  out.rhs = std::abs(rho) * one_d * one_d;
  return out;
}

void write_roc_csv(const RocCurve& curve, std::ostream& out, std::size_t k) {
  const auto g = curve.grid(k);
  out << "fpr,tpr\n";
  char buf[64];
  for (std::size_t i = 0; i < k; ++i) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", static_cast<double>(i) / static_cast<double>(k - 1), g[i]);
    out << buf;
  }
}

}  // namespace rankindep
