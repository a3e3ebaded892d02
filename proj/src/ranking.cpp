#include "rankindep/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankindep {

const char* to_string(ScorerKind kind) noexcept {
  switch (kind) {
    case ScorerKind::tree:
      return "tree";
    case ScorerKind::forest:
      return "forest";
    case ScorerKind::oracle_gaussian:
      return "oracle_gaussian";
    case ScorerKind::oracle_gumbel:
      return "oracle_gumbel";
    case ScorerKind::constant:
      return "constant";
    case ScorerKind::custom:
      return "custom";
  }
  return "?";
}

std::size_t ForestConfig::features_per_split(std::size_t dim) const {
  if (feature_subsample != 0) return feature_subsample;
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))));
}

void ForestConfig::validate(std::size_t dim) const {
  if (n_trees < 1) throw InvalidArgument("forest: n_trees must be >= 1");
  if (max_depth < 1) throw InvalidArgument("forest: max_depth must be >= 1");
  if (min_leaf < 1) throw InvalidArgument("forest: min_leaf must be >= 1");
  const std::size_t f = features_per_split(dim);
  if (f < 1 || f > dim) throw InvalidArgument("forest: feature_subsample must lie in 1..q+l");
}

namespace detail {

class ScorerImpl {
 public:
  virtual ~ScorerImpl() = default;
  virtual ScorerKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double score(std::span<const double> z) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

}  // namespace detail

namespace {

using detail::ScorerImpl;

void check_dim(std::span<const double> z, std::size_t dim) {
  if (z.size() != dim) {
    throw InvalidArgument("scorer expects " + std::to_string(dim) + " coordinates, got " + std::to_string(z.size()));
  }
}

class ConstantScorer final : public ScorerImpl {
 public:
  ConstantScorer(std::size_t dim, double value) : dim_(dim), value_(value) {}
  ScorerKind kind() const override { return ScorerKind::constant; }
  std::size_t dim() const override { return dim_; }
  double score(std::span<const double> z) const override {
    check_dim(z, dim_);
    return value_;
  }
  nlohmann::json to_json() const override { return {{"kind", "constant"}, {"dim", dim_}, {"value", value_}}; }

 private:
  std::size_t dim_;
  double value_;
};

class FunctionScorer final : public ScorerImpl {
 public:
  FunctionScorer(std::size_t dim, std::function<double(std::span<const double>)> fn) : dim_(dim), fn_(std::move(fn)) {}
  ScorerKind kind() const override { return ScorerKind::custom; }
  std::size_t dim() const override { return dim_; }
  double score(std::span<const double> z) const override {
    check_dim(z, dim_);
    return fn_(z);
  }
  nlohmann::json to_json() const override { throw InvalidArgument("custom scorers cannot be serialized"); }

 private:
  std::size_t dim_;
  std::function<double(std::span<const double>)> fn_;
};

class TreeScorer final : public ScorerImpl {
 public:
  TreeScorer(std::size_t dim, std::vector<TreeNode> nodes) : dim_(dim), nodes_(std::move(nodes)) {}
  ScorerKind kind() const override { return ScorerKind::tree; }
  std::size_t dim() const override { return dim_; }
  double score(std::span<const double> z) const override {
    check_dim(z, dim_);
    return predict(z);
  }
  double predict(std::span<const double> z) const {
    std::uint32_t i = 0;
    while (!nodes_[i].is_leaf()) {
      const TreeNode& node = nodes_[i];
      i = z[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[i].value;
  }
  nlohmann::json nodes_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : nodes_) {
      if (n.is_leaf()) {
        arr.push_back({{"value", n.value}, {"n_pos", n.n_pos}, {"n_neg", n.n_neg}});
      } else {
        arr.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
                       {"value", n.value}, {"n_pos", n.n_pos}, {"n_neg", n.n_neg}});
      }
    }
    return arr;
  }
  nlohmann::json to_json() const override { return {{"kind", "tree"}, {"dim", dim_}, {"nodes", nodes_json()}}; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::size_t dim_;
  std::vector<TreeNode> nodes_;
};

class ForestScorer final : public ScorerImpl {
 public:
  ForestScorer(std::size_t dim, std::vector<TreeScorer> trees) : dim_(dim), trees_(std::move(trees)) {}
  ScorerKind kind() const override { return ScorerKind::forest; }
  std::size_t dim() const override { return dim_; }
  double score(std::span<const double> z) const override {
    check_dim(z, dim_);
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(z);
    return sum / static_cast<double>(trees_.size());
  }
  nlohmann::json to_json() const override {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_) trees.push_back({{"nodes", t.nodes_json()}});
    return {{"kind", "forest"}, {"dim", dim_}, {"trees", trees}};
  }
  std::size_t size() const { return trees_.size(); }

 private:
  std::size_t dim_;
  std::vector<TreeScorer> trees_;
};

class QuadraticScorer final : public ScorerImpl {
 public:
  explicit QuadraticScorer(Eigen::MatrixXd theta) : theta_(std::move(theta)) {}
  ScorerKind kind() const override { return ScorerKind::oracle_gaussian; }
  std::size_t dim() const override { return static_cast<std::size_t>(theta_.rows()); }
  double score(std::span<const double> z) const override {
    check_dim(z, dim());
    const Eigen::Map<const Eigen::VectorXd> v(z.data(), static_cast<Eigen::Index>(z.size()));
    return v.dot(theta_ * v);
  }
  nlohmann::json to_json() const override {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < theta_.rows(); ++i) {
      std::vector<double> r(static_cast<std::size_t>(theta_.cols()));
      for (Eigen::Index j = 0; j < theta_.cols(); ++j) r[static_cast<std::size_t>(j)] = theta_(i, j);
      rows.push_back(r);
    }
    return {{"kind", "oracle_gaussian"}, {"dim", dim()}, {"theta", rows}};
  }

 private:
  Eigen::MatrixXd theta_;
};

class GumbelScorer final : public ScorerImpl {
 public:
  explicit GumbelScorer(double rho) : rho_(rho) {}
  ScorerKind kind() const override { return ScorerKind::oracle_gumbel; }
  std::size_t dim() const override { return 2; }
  double score(std::span<const double> z) const override {
    check_dim(z, 2);
    return rho_ * (2.0 * z[0] - 1.0) * (2.0 * z[1] - 1.0);
  }
  nlohmann::json to_json() const override { return {{"kind", "oracle_gumbel"}, {"dim", 2}, {"rho", rho_}}; }

 private:
  double rho_;
};

// ---------------------------------------------------------------------------
// Tree growing.
// ---------------------------------------------------------------------------

struct TrainingSet {
  const Matrix& neg;
  const Matrix& pos;
  std::size_t dim() const { return neg.cols(); }
  // Row id r < neg.rows() is negative; otherwise positive row r - neg.rows().
  double value(std::uint32_t r, std::size_t f) const {
    return r < neg.rows() ? neg(r, f) : pos(r - neg.rows(), f);
  }
  bool positive(std::uint32_t r) const { return r >= neg.rows(); }
};

// Split gains are measured in (positive, negative) pair counts: splitting a
// node into L and R changes twice the number of correctly ordered pairs by
// |n+_L n-_R - n-_L n+_R| = n+ n- |n+_L/n+ - n-_L/n-|.
class TreeGrower {
 public:
  TreeGrower(const TrainingSet& data, const ForestConfig& cfg, RngStream& rng)
      : data_(data), cfg_(cfg), rng_(rng), features_(data.dim()) {
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  std::vector<TreeNode> grow(std::vector<std::uint32_t> rows) {
    rows_ = std::move(rows);
    nodes_.clear();
    grow_node(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  struct Candidate {
    double score = 0.0;
    std::size_t feature = 0;
    double threshold = 0.0;
  };
  struct Entry {
    double value;
    std::uint32_t local;  // position within the node
    bool positive;
  };

  std::uint32_t grow_node(std::size_t begin, std::size_t end, std::size_t depth) {
    std::uint32_t n_pos = 0;
    for (std::size_t i = begin; i < end; ++i) n_pos += data_.positive(rows_[i]) ? 1 : 0;
    const auto size = static_cast<std::uint32_t>(end - begin);
    const std::uint32_t n_neg = size - n_pos;

    const auto id = static_cast<std::uint32_t>(nodes_.size());
    TreeNode node;
    node.n_pos = n_pos;
    node.n_neg = n_neg;
    node.value = static_cast<double>(n_pos) / static_cast<double>(size);
    nodes_.push_back(node);

    if (depth >= cfg_.max_depth || size < 2 * cfg_.min_leaf || n_pos == 0 || n_neg == 0) return id;
    const Candidate best = best_split(begin, end, n_pos, n_neg);
    if (!(best.score >= 0.5)) return id;  // pair counts: zero gain

    auto mid_it = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::uint32_t r) {
                                   return data_.value(r, best.feature) <= best.threshold;
                                 });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
    if (mid == begin || mid == end) return id;
    const std::uint32_t left = grow_node(begin, mid, depth + 1);
    const std::uint32_t right = grow_node(mid, end, depth + 1);
    TreeNode& n = nodes_[id];
    n.feature = static_cast<std::int32_t>(best.feature);
    n.threshold = best.threshold;
    n.left = left;
    n.right = right;
    return id;
  }

  // Random size-k subset of the coordinates (partial Fisher-Yates).
  std::vector<std::size_t> draw_features(std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) std::swap(features_[i], features_[i + rng_.uniform_index(features_.size() - i)]);
    return {features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(k)};
  }

  void sorted_column(std::size_t begin, std::size_t end, std::size_t f, std::vector<Entry>& out) const {
    out.clear();
    for (std::size_t i = begin; i < end; ++i) {
      out.push_back({data_.value(rows_[i], f), static_cast<std::uint32_t>(i - begin), data_.positive(rows_[i])});
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
  }

  static double midpoint(double lo, double hi) {
    const double t = 0.5 * (lo + hi);
    return t < hi ? t : lo;
  }

  Candidate best_split(std::size_t begin, std::size_t end, std::uint32_t n_pos, std::uint32_t n_neg) {
    const std::size_t k = cfg_.features_per_split(data_.dim());
    const std::vector<std::size_t> parents = draw_features(k);
    const std::size_t m = end - begin;
    const std::size_t min_leaf = cfg_.min_leaf;

    Candidate best;
    struct Parent {
      std::size_t feature;
      double threshold;
      double gain;
    };
    std::vector<Parent> parent_candidates;
    std::vector<std::size_t> valid;
    for (std::size_t f : parents) {
      sorted_column(begin, end, f, column_);
      valid.clear();
      std::vector<double> gains;
      double lp = 0, ln = 0;
      std::size_t best_pos = m;
      double best_gain = -1.0;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        (column_[i].positive ? lp : ln) += 1.0;
        if (i + 1 < min_leaf) continue;
        if (m - (i + 1) < min_leaf) break;
        if (column_[i].value == column_[i + 1].value) continue;
        const double gain = std::abs(lp * (n_neg - ln) - ln * (n_pos - lp));
        valid.push_back(i);
        gains.push_back(gain);
        if (gain > best_gain) {
          best_gain = gain;
          best_pos = i;
        }
      }
      if (valid.empty()) continue;
      auto add = [&](std::size_t vi) {
        const std::size_t i = valid[vi];
        const double thr = midpoint(column_[i].value, column_[i + 1].value);
        for (const auto& c : parent_candidates) {
          if (c.feature == f && c.threshold == thr) return;
        }
        parent_candidates.push_back({f, thr, gains[vi]});
      };
      if (!cfg_.lookahead) {
        if (best_gain > best.score) best = {best_gain, f, midpoint(column_[best_pos].value, column_[best_pos + 1].value)};
        continue;
      }
      add(static_cast<std::size_t>(std::find(valid.begin(), valid.end(), best_pos) - valid.begin()));
      const std::size_t q = cfg_.lookahead_thresholds;
      for (std::size_t j = 1; j <= q; ++j) {
        const std::size_t target = m * j / (q + 1);
        const auto it = std::lower_bound(valid.begin(), valid.end(), target == 0 ? 0 : target - 1);
        add(static_cast<std::size_t>((it == valid.end() ? valid.end() - 1 : it) - valid.begin()));
      }
    }
    if (!cfg_.lookahead || parent_candidates.empty()) return best;

    // Second level: fresh coordinate subset, each column sorted once.
    const std::vector<std::size_t> children = draw_features(k);
    child_columns_.resize(children.size());
    for (std::size_t c = 0; c < children.size(); ++c) sorted_column(begin, end, children[c], child_columns_[c]);
    std::vector<double> parent_values(m);
    side_.resize(m);
    for (const Parent& cand : parent_candidates) {
      for (std::size_t i = begin; i < end; ++i) parent_values[i - begin] = data_.value(rows_[i], cand.feature);
      double tot_p[2] = {0, 0}, tot_n[2] = {0, 0};
      for (std::size_t i = 0; i < m; ++i) {
        side_[i] = parent_values[i] <= cand.threshold ? 0 : 1;
        (data_.positive(rows_[begin + i]) ? tot_p : tot_n)[side_[i]] += 1.0;
      }
      double child_best[2] = {0.0, 0.0};
      for (const auto& col : child_columns_) {
        double cp[2] = {0, 0}, cn[2] = {0, 0};
        double last[2] = {0, 0};
        for (const Entry& e : col) {
          const int s = side_[e.local];
          const double count = cp[s] + cn[s];
          if (count >= min_leaf && tot_p[s] + tot_n[s] - count >= min_leaf && last[s] < e.value) {
            const double g = std::abs(cp[s] * (tot_n[s] - cn[s]) - cn[s] * (tot_p[s] - cp[s]));
            child_best[s] = std::max(child_best[s], g);
          }
          (e.positive ? cp : cn)[s] += 1.0;
          last[s] = e.value;
        }
      }
      const double score = cand.gain + child_best[0] + child_best[1];
      if (score > best.score) best = {score, cand.feature, cand.threshold};
    }
    return best;
  }

  const TrainingSet& data_;
  const ForestConfig& cfg_;
  RngStream& rng_;
  std::vector<std::size_t> features_;
  std::vector<std::uint32_t> rows_;
  std::vector<TreeNode> nodes_;
  std::vector<Entry> column_;
  std::vector<std::vector<Entry>> child_columns_;
  std::vector<unsigned char> side_;
};

void check_training(const Matrix& neg, const Matrix& pos, const ForestConfig& cfg) {
  if (neg.rows() == 0 || pos.rows() == 0) throw InvalidArgument("ranking: both classes need at least one row");
  if (neg.cols() != pos.cols()) throw InvalidArgument("ranking: class samples have different widths");
  for (const Matrix* m : {&neg, &pos}) {
    for (double v : m->data()) {
      if (!std::isfinite(v)) throw InvalidArgument("ranking: non-finite feature value");
    }
  }
  cfg.validate(neg.cols());
}

TreeScorer grow_tree(const TrainingSet& data, std::vector<std::uint32_t> rows, const ForestConfig& cfg,
                     RngStream rng) {
  TreeGrower grower(data, cfg, rng);
  return TreeScorer(data.dim(), grower.grow(std::move(rows)));
}

std::vector<std::uint32_t> all_rows(const TrainingSet& data) {
  std::vector<std::uint32_t> rows(data.neg.rows() + data.pos.rows());
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

std::vector<TreeNode> nodes_from_json(const nlohmann::json& arr) {
  std::vector<TreeNode> nodes;
  for (const auto& j : arr) {
    TreeNode n;
    n.value = j.at("value").get<double>();
    n.n_pos = j.value("n_pos", 0u);
    n.n_neg = j.value("n_neg", 0u);
    if (j.contains("feature")) {
      n.feature = j.at("feature").get<std::int32_t>();
      n.threshold = j.at("threshold").get<double>();
      n.left = j.at("left").get<std::uint32_t>();
      n.right = j.at("right").get<std::uint32_t>();
    }
    nodes.push_back(n);
  }
  for (const auto& n : nodes) {
    if (!n.is_leaf() && (n.left >= nodes.size() || n.right >= nodes.size())) {
      throw InvalidArgument("tree json: child index out of range");
    }
  }
  if (nodes.empty()) throw InvalidArgument("tree json: no nodes");
  return nodes;
}

}  // namespace

ScoringModel::ScoringModel(std::shared_ptr<const detail::ScorerImpl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw InvalidArgument("ScoringModel: null implementation");
}

ScorerKind ScoringModel::kind() const { return impl_->kind(); }
std::size_t ScoringModel::dim() const { return impl_->dim(); }
double ScoringModel::score(std::span<const double> z) const { return impl_->score(z); }

std::vector<double> ScoringModel::score_rows(const Matrix& rows) const {
  std::vector<double> out(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out[i] = impl_->score(rows.row(i));
  return out;
}

ScoringModel ScoringModel::then(std::function<double(double)> transform) const {
  auto inner = impl_;
  return from_function(dim(), [inner, transform = std::move(transform)](std::span<const double> z) {
    return transform(inner->score(z));
  });
}

nlohmann::json ScoringModel::to_json() const { return impl_->to_json(); }

ScoringModel ScoringModel::from_json(const nlohmann::json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  const auto dim = doc.at("dim").get<std::size_t>();
  if (kind == "constant") return constant(dim, doc.at("value").get<double>());
  if (kind == "tree") return ScoringModel(std::make_shared<TreeScorer>(dim, nodes_from_json(doc.at("nodes"))));
  if (kind == "forest") {
    std::vector<TreeScorer> trees;
    for (const auto& t : doc.at("trees")) trees.emplace_back(dim, nodes_from_json(t.at("nodes")));
    if (trees.empty()) throw InvalidArgument("forest json: no trees");
    return ScoringModel(std::make_shared<ForestScorer>(dim, std::move(trees)));
  }
  if (kind == "oracle_gaussian") {
    const auto& rows = doc.at("theta");
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd theta(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        theta(i, j) = rows.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)).get<double>();
      }
    }
    return ScoringModel(std::make_shared<QuadraticScorer>(std::move(theta)));
  }
  if (kind == "oracle_gumbel") return oracle_gumbel_scorer(doc.at("rho").get<double>());
  throw InvalidArgument("unknown scorer kind '" + kind + "'");
}

ScoringModel ScoringModel::constant(std::size_t dim, double value) {
  return ScoringModel(std::make_shared<ConstantScorer>(dim, value));
}

ScoringModel ScoringModel::from_function(std::size_t dim, std::function<double(std::span<const double>)> fn) {
  return ScoringModel(std::make_shared<FunctionScorer>(dim, std::move(fn)));
}

std::span<const TreeNode> tree_nodes(const ScoringModel& model) {
  if (const auto* t = dynamic_cast<const TreeScorer*>(&model.impl())) return t->nodes();
  return {};
}

std::size_t tree_count(const ScoringModel& model) {
  if (const auto* f = dynamic_cast<const ForestScorer*>(&model.impl())) return f->size();
  return model.kind() == ScorerKind::tree ? 1 : 0;
}

ScoringModel fit_ranking_tree(const Matrix& neg, const Matrix& pos, const ForestConfig& cfg, RngStream& rng) {
  check_training(neg, pos, cfg);
  const TrainingSet data{neg, pos};
  return ScoringModel(std::make_shared<TreeScorer>(grow_tree(data, all_rows(data), cfg, rng.substream(0))));
}

ScoringModel fit_ranking_forest(const Matrix& neg, const Matrix& pos, const ForestConfig& cfg, RngStream& rng) {
  check_training(neg, pos, cfg);
  const TrainingSet data{neg, pos};
  const auto n_neg = static_cast<std::uint32_t>(neg.rows());
  const auto n_pos = static_cast<std::uint32_t>(pos.rows());
  std::vector<TreeScorer> trees;
  trees.reserve(cfg.n_trees);
  for (std::size_t t = 0; t < cfg.n_trees; ++t) {
    RngStream tree_rng = rng.substream(t);
    std::vector<std::uint32_t> rows;
    if (cfg.bootstrap) {
      RngStream boot_rng = tree_rng.substream(0x626f6f74);
      rows.reserve(n_neg + n_pos);
      for (std::uint32_t i = 0; i < n_neg; ++i) rows.push_back(static_cast<std::uint32_t>(boot_rng.uniform_index(n_neg)));
      for (std::uint32_t i = 0; i < n_pos; ++i) {
        rows.push_back(n_neg + static_cast<std::uint32_t>(boot_rng.uniform_index(n_pos)));
      }
    } else {
      rows = all_rows(data);
    }
    trees.push_back(grow_tree(data, std::move(rows), cfg, tree_rng));
  }
  return ScoringModel(std::make_shared<ForestScorer>(neg.cols(), std::move(trees)));
}

ScoringModel oracle_gaussian_scorer(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& gamma_x,
                                    const Eigen::MatrixXd& gamma_y) {
  const Eigen::Index q = gamma_x.rows();
  const Eigen::Index l = gamma_y.rows();
  if (gamma_x.cols() != q || gamma_y.cols() != l || gamma.rows() != q + l || gamma.cols() != q + l) {
    throw InvalidArgument("oracle_gaussian_scorer: covariance shapes do not match");
  }
  auto inverse_of_pd = [](const Eigen::MatrixXd& m, const char* name) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 1e-12) {
      throw InvalidArgument(std::string("oracle_gaussian_scorer: ") + name + " is singular or not positive definite");
    }
    return Eigen::MatrixXd(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
  };
  // log dF/d(H x G)(z) = -z' theta z / 2 + const with theta = Gamma^{-1} -
  // blockdiag(Gamma_X^{-1}, Gamma_Y^{-1}), so the likelihood-ratio order is
  // that of -z' theta z; the stored matrix is -theta.
  Eigen::MatrixXd theta = -inverse_of_pd(gamma, "Gamma");
  theta.topLeftCorner(q, q) += inverse_of_pd(gamma_x, "Gamma_X");
  theta.bottomRightCorner(l, l) += inverse_of_pd(gamma_y, "Gamma_Y");
  // Exact zeros under independence keep the scorer constant instead of
  // leaving rounding noise that would act as an arbitrary ranking.
  theta = theta.unaryExpr([](double v) { return std::abs(v) < 1e-13 ? 0.0 : v; });
  return ScoringModel(std::make_shared<QuadraticScorer>(std::move(theta)));
}

ScoringModel oracle_gumbel_scorer(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw InvalidArgument("oracle_gumbel_scorer: rho must lie in [-1, 1]");
  return ScoringModel(std::make_shared<GumbelScorer>(rho));
}

ScoringModel oracle_for_model(const ModelSpec& spec) {
  switch (spec.model_id) {
    case ModelId::GL:
    case ModelId::GLplus: {
      const Eigen::MatrixXd gamma =
          gl_covariance(spec.d(), spec.rho, spec.model_id == ModelId::GL ? 1 : spec.u, spec.scaled);
      const auto q = static_cast<Eigen::Index>(spec.dim_x);
      const auto l = static_cast<Eigen::Index>(spec.dim_y);
      return oracle_gaussian_scorer(gamma, gamma.topLeftCorner(q, q), gamma.bottomRightCorner(l, l));
    }
    case ModelId::GUMBEL:
      return oracle_gumbel_scorer(spec.rho);
    default:
      throw UnsupportedModel(std::string("no oracle scorer for model ") + to_string(spec.model_id));
  }
}

}  // namespace rankindep
