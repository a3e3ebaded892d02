#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "rankindep/core.hpp"

namespace rankindep {

enum class ModelId { GL, GLplus, M1, M1s, M1d, GUMBEL };

const char* to_string(ModelId id) noexcept;
ModelId parse_model_id(const std::string& text);

enum class M1Variant { M1, M1s, M1d };

/// A synthetic model with dependence parameter rho; rho = 0 is independence.
struct ModelSpec {
  ModelId model_id = ModelId::GL;
  double rho = 0.0;
  std::size_t dim_x = 1;
  std::size_t dim_y = 1;
  bool scaled = true;   ///< GL / GLplus: covariance (1/sqrt(d)) Gamma instead of Gamma
  std::size_t u = 1;    ///< GLplus: 1-based X coordinate carrying the dependence

  std::size_t d() const noexcept { return dim_x + dim_y; }
  std::string label() const;

  /// q = l = d/2 (d = 2 for GUMBEL).
  static ModelSpec make(ModelId id, std::size_t d, double rho);
};

/// Covariance of the GL family: unit diagonal, Cov(X^u, Y^k) = rho for all
/// k <= l (u = 1 for GL), zero elsewhere, times 1/sqrt(d) when scaled.
Eigen::MatrixXd gl_covariance(std::size_t d, double rho, std::size_t u, bool scaled);

/// N(0, Gamma_rho) draws split into X (first d/2 coordinates) and Y.
/// Throws RhoOutOfRange if Gamma_rho is not positive definite.
PairedDataset sample_gl(std::size_t n, std::size_t d, double rho, bool scaled, RngStream& rng);

/// GL with the dependence carried by X^u (1-based) instead of X^1.
PairedDataset sample_gl_plus(std::size_t n, std::size_t d, double rho, std::size_t u, RngStream& rng,
                             bool scaled = true);

/// Noisy-circle law: X^u = rho cos(theta) + w1/4, Y^u = rho sin(theta) + w2/4
/// on the dependent coordinate pairs, independent U[0,1] elsewhere.
/// M1: pair 1 only. M1s: pairs 1..floor(q/2). M1d: all q pairs.
PairedDataset sample_m1(std::size_t n, std::size_t d, double rho, M1Variant variant, RngStream& rng);

/// Bilinear copula f(x, y) = 1 + rho (2x - 1)(2y - 1) on [0,1]^2, sampled by
/// inverting the conditional CDF of Y given X.
PairedDataset sample_gumbel(std::size_t n, double rho, RngStream& rng);

/// Draws n observations from `spec`.
PairedDataset sample_model(const ModelSpec& spec, std::size_t n, RngStream& rng);

}  // namespace rankindep
