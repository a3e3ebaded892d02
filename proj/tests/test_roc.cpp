#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rankindep/datagen.hpp"
#include "rankindep/ranking.hpp"
#include "rankindep/rankstats.hpp"
#include "rankindep/roc.hpp"

using namespace rankindep;

namespace {

double trapezoid(const RocCurve& c) {
  double a = 0;
  for (std::size_t i = 1; i < c.points.size(); ++i)
    a += (c.points[i].first - c.points[i - 1].first) * (c.points[i].second + c.points[i - 1].second) / 2;
  return a;
}

void check_shape(const RocCurve& c) {
  REQUIRE(c.points.size() >= 2);
  CHECK(c.points.front() == std::pair{0.0, 0.0});
  CHECK(c.points.back() == std::pair{1.0, 1.0});
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    CHECK(c.points[i].first >= c.points[i - 1].first);
    CHECK(c.points[i].second >= c.points[i - 1].second);
  }
  CHECK(std::abs(trapezoid(c) - c.auc) < 1e-12);
}

}  // namespace

TEST_CASE("two by two") {
  const std::vector<double> neg{1, 3}, pos{2, 4};
  const auto c = empirical_roc(neg, pos);
  check_shape(c);
  CHECK(c.auc == 0.75);
  CHECK(std::find(c.points.begin(), c.points.end(), std::pair{0.5, 0.5}) != c.points.end());
  // vertical jumps report their upper end
  CHECK(c.tpr_at(0.5) == 1.0);
  CHECK(c.tpr_at(0.25) == 0.5);
  CHECK_THROWS_AS(empirical_roc(std::vector<double>{}, pos), InvalidArgument);
}

TEST_CASE("identical samples give the diagonal") {
  const std::vector<double> s{1, 1, 2, 3, 3, 3, 5};
  const auto c = empirical_roc(s, s);
  check_shape(c);
  CHECK(c.sup_distance_to_diagonal() < 1e-12);
  CHECK(c.auc == doctest::Approx(0.5));
}

TEST_CASE("stochastic dominance stays above the diagonal") {
  RngStream rng(1, 0);
  std::vector<double> neg(10000), pos(10000);
  for (auto& v : neg) v = rng.normal();
  for (auto& v : pos) v = rng.normal() + 0.5;
  const auto c = empirical_roc(neg, pos);
  check_shape(c);
  const auto g = c.grid();
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] >= double(i) / (g.size() - 1) - 0.02);
}

TEST_CASE("AUC agrees with the rank identity and is transform invariant") {
  for (int inst = 0; inst < 50; ++inst) {
    RngStream rng(2, std::uint64_t(inst));
    std::vector<double> neg(37), pos(23);
    for (auto& v : neg) v = rng.normal();
    for (auto& v : pos) v = rng.normal() + 0.2;
    const auto r = compute_ranks(neg, pos, rng);
    const auto c = empirical_roc(neg, pos);
    CHECK(c.auc == doctest::Approx(auc_from_ranks(r, 37, 23)).epsilon(1e-14));
    for (auto& v : neg) v = std::exp(v);
    for (auto& v : pos) v = std::exp(v);
    const auto t = empirical_roc(neg, pos);
    CHECK(t.points == c.points);
  }
}

TEST_CASE("random halves of one sample converge to the diagonal") {
  RngStream rng(3, 0);
  const std::size_t m = 5000;
  std::vector<double> a(m), b(m);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform();
  const auto c = empirical_roc(a, b);
  CHECK(c.sup_distance_to_diagonal() <= 2 * std::sqrt(std::log(2 / 0.01) / m));
}

TEST_CASE("oracle ROC under independence is the diagonal") {
  const auto spec = ModelSpec::make(ModelId::GL, 4, 0.0);
  RngStream rng(4, 0);
  const auto c = oracle_roc_monte_carlo(spec, oracle_for_model(spec), 100000, rng);
  CHECK(c.sup_distance_to_diagonal() <= 0.02);
  CHECK_THROWS_AS(oracle_roc_monte_carlo(spec, ScoringModel::constant(3), 100, rng), InvalidArgument);
}

TEST_CASE("optimal curves are ordered in rho and concave") {
  std::vector<std::vector<double>> grids;
  for (double rho : {0.05, 0.1, 0.15, 0.2}) {
    const auto spec = ModelSpec::make(ModelId::GL, 10, rho);
    RngStream rng(5, 0);
    grids.push_back(oracle_roc_monte_carlo(spec, oracle_for_model(spec), 100000, rng).grid());
  }
  for (std::size_t k = 1; k < grids.size(); ++k)
    for (std::size_t i = 0; i < grids[k].size(); ++i) CHECK(grids[k][i] >= grids[k - 1][i] - 0.01);
  // discrete second differences on a coarse grid
  const auto& top = grids.back();
  for (std::size_t i = 16; i + 16 < top.size(); i += 16) CHECK(top[i + 16] - 2 * top[i] + top[i - 16] <= 0.01);
}

TEST_CASE("gumbel AUC identity") {
  RngStream r0(6, 0);
  const auto zero = check_auc_tv_gumbel(0.0, 20000, r0);
  CHECK(zero.rhs == 0.0);
  CHECK(std::abs(zero.lhs) < 4 * zero.lhs_stderr + 1e-3);

  RngStream r1(6, 1);
  const auto e = check_auc_tv_gumbel(0.8, 200000, r1);
  CHECK(e.rhs == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(e.lhs > 0);
  CHECK(e.lhs_stderr > 0);
  MESSAGE("gumbel rho=0.8 lhs=" << e.lhs << " +- " << e.lhs_stderr << " rhs=" << e.rhs << " ratio=" << e.ratio());
  CHECK_THROWS_AS(check_auc_tv_gumbel(1.5, 100, r1), InvalidArgument);
}

TEST_CASE("csv export") {
  const std::vector<double> neg{1, 3}, pos{2, 4};
  std::ostringstream os;
  write_roc_csv(empirical_roc(neg, pos), os, 5);
  CHECK(os.str() == "fpr,tpr\n0.000000,0.500000\n0.250000,0.500000\n0.500000,1.000000\n0.750000,1.000000\n1.000000,1.000000\n");
}
