#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rankindep/datagen.hpp"
#include "rankindep/rankstats.hpp"
#include "rankindep/split.hpp"

using namespace rankindep;

namespace {

PairedDataset index_dataset(std::size_t n) {
  // X_i = i, Y_i = 1000 + i so each row can be traced
  Matrix x(n, 1), y(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = double(i);
    y(i, 0) = 1000.0 + double(i);
  }
  return {x, y};
}

}  // namespace

TEST_CASE("split sizes") {
  SplitConfig cfg{400, 0.5};
  CHECK(cfg.n_plus() == 200);
  CHECK(cfg.n_minus() == 200);
  CHECK(cfg.test_plus(500) == 50);
  CHECK(cfg.test_minus(500) == 50);
  CHECK_NOTHROW(cfg.validate(500));

  // n' = 1 < 1/p
  SplitConfig tiny{4, 0.5};
  CHECK_THROWS_AS(tiny.validate(5), InvalidArgument);
  SplitConfig all{5, 0.5};
  CHECK_THROWS_AS(all.validate(5), InvalidArgument);
  SplitConfig badp{4, 1.0};
  CHECK_THROWS_AS(badp.validate(10), InvalidArgument);

  const auto f = SplitConfig::from_fraction(500, 0.8, 0.5);
  CHECK(f.n_learn == 400);
}

TEST_CASE("blocks are disjoint and exhaust the rows") {
  const auto data = index_dataset(103);
  SplitConfig cfg{82, 0.3};
  for (bool pre : {false, true}) {
    cfg.pre_shuffle = pre;
    RngStream rng(1, pre);
    const auto s = split_shuffle(data, cfg, rng);
    CHECK(s.neg_train.size() == cfg.n_minus());
    CHECK(s.pos_train.size() == cfg.n_plus());
    CHECK(s.neg_test.size() == cfg.test_minus(103));
    CHECK(s.pos_test.size() == cfg.test_plus(103));

    std::vector<std::size_t> xs, ys;
    for (const auto* b : {&s.neg_train, &s.pos_train, &s.neg_test, &s.pos_test}) {
      xs.insert(xs.end(), b->x_index.begin(), b->x_index.end());
      ys.insert(ys.end(), b->y_index.begin(), b->y_index.end());
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<std::size_t> all(103);
    std::iota(all.begin(), all.end(), 0);
    CHECK(xs == all);
    CHECK(ys == all);

    // positives keep their pairing; negatives shuffle Y within their own block
    for (const auto* b : {&s.pos_train, &s.pos_test}) CHECK(b->x_index == b->y_index);
    for (const auto* b : {&s.neg_train, &s.neg_test}) {
      auto a = b->x_index, c = b->y_index;
      std::sort(a.begin(), a.end());
      std::sort(c.begin(), c.end());
      CHECK(a == c);
    }
    if (!pre) {
      // original order: negatives first in each half
      CHECK(s.neg_train.x_index.front() == 0);
      CHECK(s.pos_test.x_index.back() == 102);
    }
  }
}

TEST_CASE("derangement option removes fixed points") {
  const auto data = index_dataset(60);
  SplitConfig cfg{40, 0.5};
  cfg.derangement = true;
  for (int r = 0; r < 20; ++r) {
    RngStream rng(2, r);
    const auto s = split_shuffle(data, cfg, rng);
    CHECK(s.sigma.fixed_points() == 0);
    CHECK(s.sigma_prime.fixed_points() == 0);
  }
}

TEST_CASE("positive test ranks are uniform under independence") {
  // n' = 4 with n'_+ = 2: each of the C(4,2) = 6 rank subsets is equally likely
  // when the score is a fixed function of the pair and the data are null.
  SplitConfig cfg{16, 0.5};
  std::map<std::vector<std::uint32_t>, int> counts;
  const int reps = 6000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(3, r);
    const auto data = sample_gl(20, 2, 0.0, false, rng);
    RngStream srng = rng.substream(1);
    const auto s = split_shuffle(data, cfg, srng);
    auto score = [&](const PairBlock& b) {
      std::vector<double> v;
      for (std::size_t k = 0; k < b.size(); ++k) v.push_back(data.x()(b.x_index[k], 0) * data.y()(b.y_index[k], 0));
      return v;
    };
    RngStream tie = rng.substream(2);
    const auto ranks = compute_ranks(score(s.neg_test), score(s.pos_test), tie);
    ++counts[ranks.pos_ranks];
  }
  CHECK(counts.size() == 6);
  const double e = reps / 6.0;
  double chi2 = 0;
  for (const auto& [k, c] : counts) chi2 += (c - e) * (c - e) / e;
  CHECK(chi2 < 20.5);  // chi-square(5) at 0.999
}

TEST_CASE("training samples are exchangeable under independence") {
  // MWW two-sample test between neg_train and pos_train on a fixed score.
  SplitConfig cfg{40, 0.5};
  const int reps = 500;
  int rejections = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(4, r);
    const auto data = sample_gl(50, 4, 0.0, false, rng);
    RngStream srng = rng.substream(1);
    const auto s = split_shuffle(data, cfg, srng);
    auto score = [&](const PairBlock& b) {
      std::vector<double> v;
      for (std::size_t k = 0; k < b.size(); ++k)
        v.push_back(data.x()(b.x_index[k], 0) * data.y()(b.y_index[k], 1) + data.x()(b.x_index[k], 1));
      return v;
    };
    const double auc = auc_pair_count(score(s.neg_train), score(s.pos_train));
    // normal approximation of the MWW null, two-sided at 0.05
    const double m = 20, n = 20;
    const double sd = std::sqrt((m + n + 1) / (12 * m * n));
    if (std::abs(auc - 0.5) / sd > 1.96) ++rejections;
  }
  const double rate = double(rejections) / reps;
  CHECK(rate <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / reps));
}
