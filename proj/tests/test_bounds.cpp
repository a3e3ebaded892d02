#include <doctest.h>

#include <cmath>

#include "rankindep/bounds.hpp"
#include "rankindep/nulldist.hpp"

using namespace rankindep;

TEST_CASE("level constant over the catalog") {
  for (double p : {0.1, 0.3, 0.5, 0.8}) {
    for (const auto& phi : {phi_mww(), phi_power(2), phi_power(3.5)}) {
      const double d = *phi.sup_phi_prime();
      const double hand = std::min({p / 1.0, 1 / (p * d * d), 1 / ((1 - p) * d * d)}) / 8;
      CHECK(level_constant(p, phi) == doctest::Approx(hand).epsilon(1e-14));
    }
  }
  CHECK(level_constant(0.5, phi_mww()) == 1.0 / 16);
  CHECK_THROWS_AS(level_constant(0.5, phi_rtb(0.9)), UnsupportedPhi);
}

TEST_CASE("first term") {
  const auto r = type2_first_term(2000, 0.5, phi_mww(), 0.25, 0.05);
  CHECK(r.c_constant == 1.0 / 16);
  CHECK(r.kappa_p == 0.5);
  CHECK(r.first_term == doctest::Approx(18 * std::exp(-0.3125)));
  CHECK(r.first_term == doctest::Approx(13.17).epsilon(1e-3));
  CHECK(r.n_condition);

  const auto with_alpha = type2_first_term(2000, 0.5, phi_mww(), 0.25, 0.05, 0.05);
  // 4 log(360) / (0.04 / 16) = 9417 > 2000
  CHECK_FALSE(with_alpha.n_prime_condition);
  CHECK(type2_first_term(10000, 0.5, phi_mww(), 0.25, 0.05, 0.05).n_prime_condition);

  CHECK_THROWS_AS(type2_first_term(100, 0.5, phi_mww(), 0.1, 0.1), InvalidArgument);
  CHECK_THROWS_AS(type2_first_term(100, 0.5, phi_mww(), 0.1, -0.1), InvalidArgument);
  CHECK_THROWS_AS(type2_first_term(100, 0.5, phi_rtb(0.9), 0.2, 0.0), UnsupportedPhi);
  CHECK(type2_first_term(100, 0.5, phi_mww(), 0.2, 0.0).to_json().contains("first_term"));
}

TEST_CASE("first term is monotone and bounded") {
  double prev = 19;
  for (std::size_t n : {10, 100, 1000, 10000, 100000, 1000000}) {
    const double t = type2_first_term(n, 0.5, phi_mww(), 0.3, 0.0).first_term;
    CHECK(t > 0);
    CHECK(t <= 18);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(type2_first_term(1000, 0.5, phi_mww(), 0.3, 0.0).first_term <
        type2_first_term(1000, 0.5, phi_mww(), 0.2, 0.0).first_term);
  // smaller C (power phi with larger derivative) gives a larger term
  CHECK(type2_first_term(1000, 0.5, phi_power(3), 0.3, 0.0).first_term >
        type2_first_term(1000, 0.5, phi_mww(), 0.3, 0.0).first_term);
}

TEST_CASE("epsilon estimates") {
  RngStream r0(1, 0);
  const auto zero = epsilon_for_model(ModelSpec::make(ModelId::GL, 4, 0.0), phi_mww(), 20000, r0);
  CHECK(std::abs(zero.epsilon) <= 3 * zero.stderr_);

  double prev = 0;
  for (double rho : {0.1, 0.3, 0.6}) {
    RngStream rng(1, 1);
    const auto e = epsilon_for_model(ModelSpec::make(ModelId::GL, 4, rho), phi_mww(), 100000, rng);
    CHECK(e.epsilon > prev);
    CHECK(e.epsilon >= -3 * e.stderr_);
    // with p = 1/2 and phi = id, W - 1/2 = (1 - p)(AUC - 1/2) up to O(1/m)
    CHECK(e.epsilon == doctest::Approx(0.5 * (e.auc - 0.5)).epsilon(1e-3));
    prev = e.epsilon;
  }
  RngStream rng(1, 2);
  CHECK_THROWS_AS(epsilon_for_model(ModelSpec::make(ModelId::M1, 4, 1.0), phi_mww(), 1000, rng), UnsupportedModel);
}
