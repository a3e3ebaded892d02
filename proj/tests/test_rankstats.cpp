#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankindep/rankstats.hpp"

using namespace rankindep;

namespace {

std::vector<double> normals(RngStream& rng, std::size_t n, double shift = 0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal() + shift;
  return v;
}

// O(n^2) pair count for tie-free data, integer numerator
double brute_auc(const std::vector<double>& neg, const std::vector<double>& pos) {
  long hits = 0;
  for (double p : pos)
    for (double q : neg) hits += p > q;
  return double(hits) / double(neg.size() * pos.size());
}

}  // namespace

TEST_CASE("compute_ranks without ties") {
  RngStream rng(1, 0);
  const std::vector<double> neg{1, 3}, pos{2, 4};
  const auto r = compute_ranks(neg, pos, rng);
  CHECK(r.pos_ranks == std::vector<std::uint32_t>{2, 4});
  CHECK(r.n == 4);
  CHECK_FALSE(r.tie_policy_used);
  CHECK(auc_from_ranks(r, 2, 2) == 0.75);
}

TEST_CASE("compute_ranks errors") {
  RngStream rng(1, 0);
  const std::vector<double> neg{5, 6, 7}, empty;
  CHECK_THROWS_AS(compute_ranks(neg, empty, rng), InvalidArgument);
  CHECK_THROWS_AS(compute_ranks(empty, neg, rng), InvalidArgument);
  const std::vector<double> nan{std::nan("")};
  CHECK_THROWS_AS(compute_ranks(neg, nan, rng), InvalidArgument);
}

TEST_CASE("ties are broken uniformly at random") {
  const std::vector<double> zero{0.0};
  int ones = 0;
  const int seeds = 4000;
  for (int s = 0; s < seeds; ++s) {
    RngStream rng(2, s);
    const auto r = compute_ranks(zero, zero, rng);
    CHECK(r.tie_policy_used);
    ones += r.pos_ranks[0] == 1;
  }
  CHECK(std::abs(ones / double(seeds) - 0.5) < 4 * std::sqrt(0.25 / seeds));

  // identical multisets: the expected AUC is 1/2
  const std::vector<double> same{1, 1, 2, 2, 3};
  double total = 0;
  for (int s = 0; s < seeds; ++s) {
    RngStream rng(3, s);
    total += auc_from_ranks(compute_ranks(same, same, rng), 5, 5);
  }
  CHECK(total / seeds == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("w_phi and normalized statistic") {
  const auto r34 = make_rank_vector({3, 4}, 4);
  CHECK(w_phi(r34, phi_mww()) == doctest::Approx(1.4));
  CHECK(normalized_statistic(r34, phi_mww()) == doctest::Approx(0.2));
  CHECK(w_phi(make_rank_vector({1, 2}, 4), phi_rtb(0.9)) == 0.0);
  CHECK(w_phi(make_rank_vector({4}, 4), phi_rtb(0.75)) == doctest::Approx(0.8));
  CHECK_THROWS_AS(make_rank_vector({5}, 4), InvalidArgument);
  CHECK_THROWS_AS(make_rank_vector({2, 2}, 4), InvalidArgument);
}

TEST_CASE("perfect separation, closed form") {
  const std::size_t m = 50;
  std::vector<std::uint32_t> top(m);
  std::iota(top.begin(), top.end(), std::uint32_t(m + 1));
  const auto r = make_rank_vector(top, 2 * m);
  double expected = 0;
  for (std::size_t k = m + 1; k <= 2 * m; ++k) expected += double(k) / double(2 * m + 1);
  expected = expected / m - 0.5;
  CHECK(normalized_statistic(r, phi_mww()) == doctest::Approx(expected).epsilon(1e-14));
  // (3m + 1) / (2(2m + 1)) - 1/2 -> 1/4
  CHECK(expected == doctest::Approx((3.0 * m + 1) / (2.0 * (2 * m + 1)) - 0.5));
}

TEST_CASE("null mean by enumeration") {
  // all C(6,3) = 20 subsets
  double sum = 0;
  int count = 0;
  for (std::uint32_t a = 1; a <= 6; ++a)
    for (std::uint32_t b = a + 1; b <= 6; ++b)
      for (std::uint32_t c = b + 1; c <= 6; ++c) {
        sum += normalized_statistic(make_rank_vector({a, b, c}, 6), phi_mww());
        ++count;
      }
  CHECK(count == 20);
  CHECK(std::abs(sum / count) <= 1.0 / 7);
}

TEST_CASE("rank identity matches pair counting") {
  for (int inst = 0; inst < 1000; ++inst) {
    RngStream rng(4, inst);
    const auto nn = 1 + rng.uniform_index(50), np = 1 + rng.uniform_index(50);
    const auto neg = normals(rng, nn), pos = normals(rng, np, 0.3);
    RngStream tie = rng.substream(1);
    const auto r = compute_ranks(neg, pos, tie);
    CHECK(auc_from_ranks(r, nn, np) == brute_auc(neg, pos));
    CHECK(auc_pair_count(neg, pos) == brute_auc(neg, pos));
  }
  CHECK_THROWS_AS(auc_from_ranks(make_rank_vector({1}, 1), 0, 1), InvalidArgument);
}

TEST_CASE("monotone invariance and label swap") {
  RngStream rng(5, 0);
  auto neg = normals(rng, 30), pos = normals(rng, 25, 0.5);
  RngStream t1(6, 0), t2(6, 0);
  const auto r = compute_ranks(neg, pos, t1);
  auto tneg = neg, tpos = pos;
  for (auto& v : tneg) v = std::exp(v) * 3 - 2;
  for (auto& v : tpos) v = std::exp(v) * 3 - 2;
  CHECK(compute_ranks(tneg, tpos, t2).pos_ranks == r.pos_ranks);

  RngStream t3(6, 1);
  const auto swapped = compute_ranks(pos, neg, t3);
  CHECK(auc_from_ranks(swapped, 25, 30) == doctest::Approx(1 - auc_from_ranks(r, 30, 25)).epsilon(1e-14));
}
