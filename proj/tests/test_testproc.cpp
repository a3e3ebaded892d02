#include <doctest.h>

#include <cmath>

#include "rankindep/datagen.hpp"
#include "rankindep/testproc.hpp"

using namespace rankindep;

namespace {

TestConfig quick(std::size_t kp = 1) {
  TestConfig cfg;
  cfg.k_p = kp;
  cfg.forest.n_trees = 20;
  return cfg;
}

double se(double a, int r) { return std::sqrt(a * (1 - a) / r); }

}  // namespace

TEST_CASE("config validation and sizes") {
  TestConfig cfg;
  const auto s = cfg.split_for(500);
  CHECK(s.n_learn == 400);
  CHECK(s.test_plus(500) == 50);
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = TestConfig{};
  cfg.k_p = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK(median_of({3, 1, 2}) == 2);
  CHECK(median_of({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("outcome structure") {
  RngStream rng(1, 0);
  const auto data = sample_gl(200, 4, 0.6, true, rng);
  RngStream trng(1, 1);
  const auto out = run_test(data, quick(5), trng);
  CHECK(out.per_replicate.size() == 5);
  CHECK(out.test_minus == 20);
  CHECK(out.test_plus == 20);
  for (const auto& r : out.per_replicate) {
    CHECK(r.p_value >= 0);
    CHECK(r.p_value <= 1);
    CHECK(r.reject == (r.statistic > out.threshold + 1e-9));
  }
  CHECK(out.reject == (out.p_value <= out.alpha));
  const auto j = out.to_json();
  CHECK(j.at("per_replicate").size() == 5);

  // jobs do not change results
  auto cfg = quick(5);
  cfg.jobs = 3;
  RngStream trng2(1, 1);
  const auto par = run_test(data, cfg, trng2);
  for (std::size_t r = 0; r < 5; ++r) CHECK(par.per_replicate[r].statistic == out.per_replicate[r].statistic);
}

TEST_CASE("exact level for fixed scorers") {
  // N = 50: n' = 10 split 5/5, exhaustive null
  const int reps = 2000;
  const auto spec = ModelSpec::make(ModelId::GL, 4, 0.0);
  const std::vector<ScoringModel> scorers{
      ScoringModel::constant(4),
      ScoringModel::from_function(4, [](std::span<const double> z) { return z[0] * z[2] + z[1]; }),
      // adversarial: coarse, heavily tied scores
      ScoringModel::from_function(4, [](std::span<const double> z) { return std::floor(z[0] > 0) + (z[3] > 1); })};
  for (std::size_t s = 0; s < scorers.size(); ++s) {
    int rej[3] = {0, 0, 0};
    const double alphas[3] = {0.01, 0.05, 0.1};
    for (int r = 0; r < reps; ++r) {
      RngStream rng(2, std::uint64_t(r));
      const auto data = sample_model(spec, 50, rng);
      RngStream trng = rng.substream(9);
      const auto out = run_test_with_oracle(data, quick(), scorers[s], trng);
      for (int a = 0; a < 3; ++a) rej[a] += out.per_replicate[0].p_value <= alphas[a];
    }
    for (int a = 0; a < 3; ++a) {
      CAPTURE(s);
      CAPTURE(alphas[a]);
      CHECK(rej[a] / double(reps) <= alphas[a] + 3 * se(alphas[a], reps));
    }
  }
}

TEST_CASE("oracle dimension must match") {
  RngStream rng(3, 0);
  const auto data = sample_gl(50, 4, 0.0, true, rng);
  CHECK_THROWS_AS(run_test_with_oracle(data, quick(), ScoringModel::constant(3), rng), InvalidArgument);
}

TEST_CASE("constant oracle has null power even under dependence") {
  const int reps = 300;
  int rej = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(4, std::uint64_t(r));
    const auto data = sample_gl(100, 4, 0.6, true, rng);
    RngStream trng = rng.substream(9);
    rej += run_test_with_oracle(data, quick(), ScoringModel::constant(4), trng).per_replicate[0].reject;
  }
  CHECK(rej / double(reps) <= 0.05 + 3 * se(0.05, reps));
}

TEST_CASE("gumbel oracle at rho = 0 keeps the level") {
  const int reps = 400;
  int rej = 0;
  const auto oracle = oracle_gumbel_scorer(0.5);
  for (int r = 0; r < reps; ++r) {
    RngStream rng(5, std::uint64_t(r));
    const auto data = sample_gumbel(100, 0.0, rng);
    RngStream trng = rng.substream(9);
    rej += run_test_with_oracle(data, quick(), oracle, trng).per_replicate[0].reject;
  }
  CHECK(rej / double(reps) <= 0.05 + 3 * se(0.05, reps));
}

TEST_CASE("gaussian oracle beats a constant scorer at matched seeds") {
  const auto spec = ModelSpec::make(ModelId::GL, 10, 0.2);
  const auto oracle = oracle_for_model(spec);
  const int reps = 200;
  int ro = 0, rc = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(6, std::uint64_t(r));
    const auto data = sample_model(spec, 500, rng);
    RngStream t1 = rng.substream(9), t2 = rng.substream(9);
    ro += run_test_with_oracle(data, quick(), oracle, t1).per_replicate[0].reject;
    rc += run_test_with_oracle(data, quick(), ScoringModel::constant(10), t2).per_replicate[0].reject;
  }
  CHECK(ro > rc);
}

TEST_CASE("power is monotone in rho and in N (oracle scorer)") {
  const int reps = 200;
  auto power = [&](double rho, std::size_t n) {
    const auto spec = ModelSpec::make(ModelId::GL, 4, rho);
    const auto oracle = oracle_for_model(ModelSpec::make(ModelId::GL, 4, rho == 0 ? 0.3 : rho));
    int rej = 0;
    for (int r = 0; r < reps; ++r) {
      RngStream rng(7, std::uint64_t(r));
      const auto data = sample_model(spec, n, rng);
      RngStream t = rng.substream(9);
      rej += run_test_with_oracle(data, quick(), oracle, t).per_replicate[0].reject;
    }
    return rej / double(reps);
  };
  double prev = 0;
  for (double rho : {0.0, 0.1, 0.3, 0.6}) {
    const double p = power(rho, 500);
    CHECK(p >= prev - 2 * std::sqrt(0.25 / reps));
    prev = p;
  }
  CHECK(power(0.1, 2000) >= power(0.1, 500) - 2 * std::sqrt(0.25 / reps));
}

TEST_CASE("Y equal to X is detected") {
  int small = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    RngStream rng(8, std::uint64_t(s));
    Matrix x(200, 1);
    for (std::size_t i = 0; i < 200; ++i) x(i, 0) = rng.normal();
    const PairedDataset data(x, x);
    TestConfig cfg;
    cfg.forest.n_trees = 50;
    RngStream t = rng.substream(9);
    small += run_test(data, cfg, t).p_value < 0.01;
  }
  CHECK(small >= 19);
}

TEST_CASE("single trees are supported as learner") {
  RngStream rng(9, 0);
  const auto data = sample_gl(300, 4, 0.6, true, rng);
  auto cfg = quick(3);
  cfg.learner = Learner::tree;
  RngStream t(9, 1);
  const auto out = run_test(data, cfg, t);
  CHECK(out.per_replicate.size() == 3);
  CHECK(out.mean_train_auc() > 0.5);
}
