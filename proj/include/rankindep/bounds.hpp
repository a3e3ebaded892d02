#pragma once

#include <cstddef>
#include <optional>

#include <json.hpp>

#include "rankindep/core.hpp"
#include "rankindep/datagen.hpp"
#include "rankindep/scoregen.hpp"

namespace rankindep {

struct BoundReport {
  double c_constant = 0.0;
  double kappa_p = 0.0;   ///< min(p, 1 - p)
  double first_term = 0.0;
  bool n_prime_condition = true;  ///< n' >= 4 log(18/alpha) / (C (eps - delta)^2); true when alpha absent
  bool n_condition = true;        ///< n' >= 1/p

  std::size_t n_prime = 0;
  double p = 0.5;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> alpha;
  std::string phi_label;

  nlohmann::json to_json() const;
};

/// 18 exp(-C n' (eps - delta)^2 / 16) with the level constant C for (p, phi).
/// Throws InvalidArgument when eps <= delta, UnsupportedPhi for RTB.
BoundReport type2_first_term(std::size_t n_prime, double p, const ScoreGenFn& phi, double epsilon, double delta,
                             std::optional<double> alpha = std::nullopt);

struct EpsilonEstimate {
  double epsilon = 0.0;  ///< W*_phi - int phi
  double stderr_ = 0.0;  ///< Monte Carlo standard error
  double auc = 0.5;      ///< AUC of the oracle on the same draws
};

/// Monte Carlo estimate of W*_phi - int phi: m positives and m product-of-
/// marginals negatives scored by the model's oracle; the normalized rank
/// statistic of the positives in the pooled sample. UnsupportedModel for
/// models without an oracle.
EpsilonEstimate epsilon_for_model(const ModelSpec& model, const ScoreGenFn& phi, std::size_t m, RngStream& rng);

}  // namespace rankindep
