#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rankindep/core.hpp"
#include "rankindep/datagen.hpp"

namespace rankindep {

enum class ScorerKind { tree, forest, oracle_gaussian, oracle_gumbel, constant, custom };

const char* to_string(ScorerKind kind) noexcept;

/// Hyperparameters of the ranking forest. feature_subsample = 0 means
/// ceil(sqrt(q + l)).
struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_depth = 8;
  std::size_t min_leaf = 5;
  std::size_t feature_subsample = 0;
  bool bootstrap = true;
  /// Score candidate splits by their own gain plus the best one-split gains
  /// of the two children (depth-2 lookahead). Positive and negative samples
  /// share their marginals, so a lone split has no population gain and the
  /// plain greedy rule cannot see interactions.
  bool lookahead = false;
  /// Quantile thresholds per coordinate tried as lookahead parents, in
  /// addition to the best single-split threshold.
  std::size_t lookahead_thresholds = 7;

  std::size_t features_per_split(std::size_t dim) const;
  void validate(std::size_t dim) const;
};

namespace detail {
class ScorerImpl;
}

/// A scoring function s: R^{q+l} -> R. Immutable and cheap to copy; scoring
/// is reentrant.
class ScoringModel {
 public:
  explicit ScoringModel(std::shared_ptr<const detail::ScorerImpl> impl);

  ScorerKind kind() const;
  std::size_t dim() const;
  double score(std::span<const double> z) const;
  std::vector<double> score_rows(const Matrix& rows) const;

  /// Strictly increasing post-composition t(s(z)); the result has kind custom.
  ScoringModel then(std::function<double(double)> transform) const;

  /// Tree structure, forest, oracle parameters; custom scorers throw.
  nlohmann::json to_json() const;
  static ScoringModel from_json(const nlohmann::json& doc);

  static ScoringModel constant(std::size_t dim, double value = 0.0);
  static ScoringModel from_function(std::size_t dim, std::function<double(std::span<const double>)> fn);

  const detail::ScorerImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const detail::ScorerImpl> impl_;
};

/// One node of a ranking tree; feature < 0 marks a leaf.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;  ///< leaf: positive fraction; internal: positive fraction of the node
  std::uint32_t n_pos = 0;
  std::uint32_t n_neg = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Node list of a fitted tree (root at index 0), or an empty span for other kinds.
std::span<const TreeNode> tree_nodes(const ScoringModel& model);
/// Trees of a forest (a single tree yields itself).
std::size_t tree_count(const ScoringModel& model);

/// Greedy axis-aligned ranking tree on the rows of `neg` and `pos`. At each
/// node a random subset of coordinates is searched for the threshold that
/// maximizes |n+_L/n+ - n-_L/n-|, the one-split gain in empirical AUC (with
/// cfg.lookahead, that gain plus the best gains reachable in the children).
/// Leaves score their positive fraction. Uses every row once (no bootstrap).
ScoringModel fit_ranking_tree(const Matrix& neg, const Matrix& pos, const ForestConfig& cfg, RngStream& rng);

/// n_trees trees on per-class bootstrap resamples (when cfg.bootstrap); the
/// forest score is the mean leaf score. Tree t draws from rng.substream(t).
ScoringModel fit_ranking_forest(const Matrix& neg, const Matrix& pos, const ForestConfig& cfg, RngStream& rng);

/// z -> z' (blockdiag(Gamma_X^{-1}, Gamma_Y^{-1}) - Gamma^{-1}) z, twice the
/// log likelihood ratio dF/d(H x G) of centered Gaussians up to a constant.
ScoringModel oracle_gaussian_scorer(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& gamma_x,
                                    const Eigen::MatrixXd& gamma_y);

/// (x, y) -> rho (2x - 1)(2y - 1), for the bilinear copula with uniform marginals.
ScoringModel oracle_gumbel_scorer(double rho);

/// Oracle scorer for GL, GLplus and GUMBEL; UnsupportedModel otherwise.
ScoringModel oracle_for_model(const ModelSpec& spec);

}  // namespace rankindep
