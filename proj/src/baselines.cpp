#include "rankindep/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankindep/parallel.hpp"

namespace rankindep {

const char* to_string(BaselineMethod method) noexcept {
  switch (method) {
    case BaselineMethod::hsic:
      return "hsic";
    case BaselineMethod::dcor_l1:
      return "dcor-l1";
    case BaselineMethod::dcor_l2:
      return "dcor-l2";
  }
  return "?";
}

BaselineMethod parse_baseline_method(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), '_', '-');
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "hsic") return BaselineMethod::hsic;
  if (t == "dcor-l1") return BaselineMethod::dcor_l1;
  if (t == "dcor-l2" || t == "dcor") return BaselineMethod::dcor_l2;
  throw InvalidArgument("unknown baseline method '" + text + "' (expected hsic, dcor-l1 or dcor-l2)");
}

void BaselineConfig::validate() const {
  if (k0 < 1) throw InvalidArgument("baseline: k0 must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("baseline: alpha must lie in (0, 1)");
}

namespace {

constexpr std::size_t kMedianSubsample = 2000;

void check_size(std::size_t n) {
  if (n > kBaselineMaxN) {
    throw InvalidArgument("baselines build N x N matrices; N=" + std::to_string(n) + " exceeds the limit " +
                          std::to_string(kBaselineMaxN));
  }
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double l1_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

// Square matrix stored row-major.
struct Square {
  std::size_t n = 0;
  std::vector<double> v;
  explicit Square(std::size_t size) : n(size), v(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }
};

// Sum_{i,j} a(i,j) b(pi_i, pi_j).
double permuted_inner(const Square& a, const Square& b, const std::vector<std::size_t>& pi) {
  const std::size_t n = a.n;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = &a.v[i * n];
    const double* brow = &b.v[pi[i] * n];
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += arow[j] * brow[pi[j]];
    total += s;
  }
  return total;
}

Square gaussian_gram(const Matrix& pts, double bandwidth) {
  const std::size_t n = pts.rows();
  Square g(n);
  const double scale = -1.0 / (2.0 * bandwidth * bandwidth);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::exp(scale * sq_dist(pts.row(i), pts.row(j)));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;  // zero diagonal
}

// Everything the unbiased HSIC needs, so that permuting Y costs O(N^2).
struct HsicPrep {
  Square k, l;
  std::vector<double> k_rows, l_rows;
  double k_sum = 0.0, l_sum = 0.0;

  HsicPrep(const PairedDataset& data, std::pair<double, double> bw)
      : k(gaussian_gram(data.x(), bw.first)), l(gaussian_gram(data.y(), bw.second)) {
    const std::size_t n = data.n();
    k_rows.assign(n, 0.0);
    l_rows.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        k_rows[i] += k(i, j);
        l_rows[i] += l(i, j);
      }
      k_sum += k_rows[i];
      l_sum += l_rows[i];
    }
  }

  double statistic(const std::vector<std::size_t>& pi) const {
    const auto n = static_cast<double>(k.n);
    const double trace = permuted_inner(k, l, pi);
    double cross = 0.0;
    for (std::size_t i = 0; i < k.n; ++i) cross += k_rows[i] * l_rows[pi[i]];
    return (trace + k_sum * l_sum / ((n - 1.0) * (n - 2.0)) - 2.0 / (n - 2.0) * cross) / (n * (n - 3.0));
  }
};

Square centered_distances(const Matrix& pts, DistanceMetric metric) {
  const std::size_t n = pts.rows();
  Square a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = metric == DistanceMetric::l1 ? l1_dist(pts.row(i), pts.row(j))
                                                    : std::sqrt(sq_dist(pts.row(i), pts.row(j)));
      a(i, j) = d;
      a(j, i) = d;
    }
  }
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += a(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) += grand - row_mean[i] - row_mean[j];
  }
  return a;
}

struct DcorPrep {
  Square a, b;
  double var_x = 0.0, var_y = 0.0;

  DcorPrep(const PairedDataset& data, DistanceMetric metric)
      : a(centered_distances(data.x(), metric)), b(centered_distances(data.y(), metric)) {
    const double nn = static_cast<double>(data.n()) * static_cast<double>(data.n());
    for (double v : a.v) var_x += v * v;
    for (double v : b.v) var_y += v * v;
    var_x /= nn;
    var_y /= nn;
    if (!(var_x > 0.0)) throw DegenerateInput("distance correlation: X block has zero distance variance");
    if (!(var_y > 0.0)) throw DegenerateInput("distance correlation: Y block has zero distance variance");
  }

  double statistic(const std::vector<std::size_t>& pi) const {
    const double nn = static_cast<double>(a.n) * static_cast<double>(a.n);
    const double dcov2 = permuted_inner(a, b, pi) / nn;
    return std::sqrt(std::max(dcov2, 0.0) / std::sqrt(var_x * var_y));
  }
};

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> pi(n);
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  return pi;
}

}  // namespace

double median_heuristic(const Matrix& points) {
  const std::size_t n = points.rows();
  if (n < 2) throw InvalidArgument("median_heuristic: need at least 2 points");
  std::vector<std::size_t> idx = identity_order(n);
  if (n > kMedianSubsample) {
    RngStream rng(0x6d656469616eULL, n);
    for (std::size_t i = 0; i < kMedianSubsample; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    idx.resize(kMedianSubsample);
  }
  std::vector<double> d;
  d.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) d.push_back(std::sqrt(sq_dist(points.row(idx[i]), points.row(idx[j]))));
  }
  const std::size_t m = d.size();
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(m / 2), d.end());
  double med = d[m / 2];
  if (m % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(m / 2)));
  if (!(med > 0.0)) throw DegenerateInput("median_heuristic: median pairwise distance is zero");
  return med;
}

double hsic_unbiased(const PairedDataset& data, std::pair<double, double> bandwidths) {
  if (data.n() < 4) throw InvalidArgument("hsic_unbiased: need N >= 4");
  if (!(bandwidths.first > 0.0 && bandwidths.second > 0.0)) throw InvalidArgument("hsic_unbiased: bandwidths must be > 0");
  check_size(data.n());
  return HsicPrep(data, bandwidths).statistic(identity_order(data.n()));
}

double hsic_unbiased(const PairedDataset& data) {
  if (data.n() < 4) throw InvalidArgument("hsic_unbiased: need N >= 4");
  return hsic_unbiased(data, {median_heuristic(data.x()), median_heuristic(data.y())});
}

double distance_correlation(const PairedDataset& data, DistanceMetric metric) {
  check_size(data.n());
  return DcorPrep(data, metric).statistic(identity_order(data.n()));
}

nlohmann::json PermutationOutcome::to_json() const {
  return {{"method", to_string(method)}, {"statistic", statistic}, {"p_value", p_value}, {"reject", reject},
          {"alpha", alpha},           {"k0", k0},               {"seed", seed}};
}

PermutationOutcome permutation_test(const PairedDataset& data, const BaselineConfig& cfg, RngStream& rng) {
  cfg.validate();
  check_size(data.n());
  PermutationOutcome out;
  out.method = cfg.method;
  out.alpha = cfg.alpha;
  out.k0 = cfg.k0;
  out.seed = rng.master_seed();
  out.permuted.assign(cfg.k0, 0.0);

  auto run = [&](const auto& prep) {
    out.statistic = prep.statistic(identity_order(data.n()));
    parallel_for(cfg.k0, cfg.jobs, [&](std::size_t k) {
      RngStream perm_rng = rng.substream(k);
      out.permuted[k] = prep.statistic(draw_uniform_permutation(data.n(), perm_rng).mapping());
    });
  };
  if (cfg.method == BaselineMethod::hsic) {
    if (data.n() < 4) throw InvalidArgument("hsic: need N >= 4");
    run(HsicPrep(data, {median_heuristic(data.x()), median_heuristic(data.y())}));
  } else {
    run(DcorPrep(data, cfg.method == BaselineMethod::dcor_l1 ? DistanceMetric::l1 : DistanceMetric::l2));
  }
  // Permuted statistics are summed in a different order than the observed
  // one; a relative tolerance keeps exact ties (e.g. pi = identity) counted.
  const double tol = 1e-12 * std::max(1.0, std::abs(out.statistic));
  const auto at_least = std::count_if(out.permuted.begin(), out.permuted.end(),
                                      [&](double v) { return v >= out.statistic - tol; });
  out.p_value = (1.0 + static_cast<double>(at_least)) / (static_cast<double>(cfg.k0) + 1.0);
  out.reject = out.p_value <= cfg.alpha;
  return out;
}

}  // namespace rankindep
