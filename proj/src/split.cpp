#include "rankindep/split.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace rankindep {

std::size_t SplitConfig::n_plus() const noexcept {
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(n_learn)));
}

std::size_t SplitConfig::test_plus(std::size_t total) const noexcept {
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(test_size(total))));
}

void SplitConfig::validate(std::size_t total) const {
  auto fail = [](const std::string& what) { throw InvalidArgument("split: " + what); };
  if (!(p > 0.0 && p < 1.0)) fail("p must lie in (0, 1)");
  if (n_learn >= total) fail("need n < N (n=" + std::to_string(n_learn) + ", N=" + std::to_string(total) + ")");
  const double min_size = 1.0 / p;
  if (static_cast<double>(n_learn) < min_size) fail("need n >= 1/p (n=" + std::to_string(n_learn) + ")");
  if (static_cast<double>(test_size(total)) < min_size) {
    fail("need n' >= 1/p (n'=" + std::to_string(test_size(total)) + ")");
  }
  if (n_plus() < 1 || n_minus() < 1) fail("learning half needs n_+ >= 1 and n_- >= 1");
  if (test_plus(total) < 1 || test_minus(total) < 1) fail("testing half needs n'_+ >= 1 and n'_- >= 1");
  if (derangement && (n_minus() < 2 || test_minus(total) < 2)) fail("derangements need n_- >= 2 and n'_- >= 2");
}

SplitConfig SplitConfig::from_fraction(std::size_t total, double learn_fraction, double p) {
  if (!(learn_fraction > 0.0 && learn_fraction < 1.0)) throw InvalidArgument("split: learn fraction must lie in (0, 1)");
  SplitConfig cfg;
  cfg.n_learn = static_cast<std::size_t>(std::llround(learn_fraction * static_cast<double>(total)));
  cfg.p = p;
  return cfg;
}

SplitShuffleResult split_shuffle(const PairedDataset& data, const SplitConfig& cfg, RngStream& rng) {
  const std::size_t total = data.n();
  cfg.validate(total);
  SplitShuffleResult out;
  RngStream order_rng = rng.substream(0);
  RngStream sigma_rng = rng.substream(1);
  if (cfg.pre_shuffle) {
    out.row_order = draw_uniform_permutation(total, order_rng).mapping();
  } else {
    out.row_order.resize(total);
    std::iota(out.row_order.begin(), out.row_order.end(), std::size_t{0});
  }
  const std::size_t n = cfg.n_learn;
  const std::size_t nm = cfg.n_minus();
  const std::size_t tm = cfg.test_minus(total);
  auto draw = [&](std::size_t m) {
    return cfg.derangement ? draw_uniform_derangement(m, sigma_rng) : draw_uniform_permutation(m, sigma_rng);
  };
  out.sigma = draw(nm);
  out.sigma_prime = draw(tm);

  const auto& row = out.row_order;
  // Block layout: [0, nm) negatives, [nm, n) positives, [n, n + tm) test
  // negatives, [n + tm, N) test positives.
  for (std::size_t i = 0; i < nm; ++i) {
    out.neg_train.x_index.push_back(row[i]);
    out.neg_train.y_index.push_back(row[out.sigma[i]]);
  }
  for (std::size_t i = nm; i < n; ++i) {
    out.pos_train.x_index.push_back(row[i]);
    out.pos_train.y_index.push_back(row[i]);
  }
  for (std::size_t i = 0; i < tm; ++i) {
    out.neg_test.x_index.push_back(row[n + i]);
    out.neg_test.y_index.push_back(row[n + out.sigma_prime[i]]);
  }
  for (std::size_t i = n + tm; i < total; ++i) {
    out.pos_test.x_index.push_back(row[i]);
    out.pos_test.y_index.push_back(row[i]);
  }
  return out;
}

}  // namespace rankindep
