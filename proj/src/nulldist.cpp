#include "rankindep/nulldist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <atomic>
#include <tuple>

#include <json.hpp>

namespace rankindep {

const char* to_string(NullMode mode) noexcept {
  return mode == NullMode::exhaustive ? "exhaustive" : "monte_carlo";
}

NullMode parse_null_mode(const std::string& text) {
  if (text == "exhaustive" || text == "exact") return NullMode::exhaustive;
  if (text == "monte_carlo" || text == "mc") return NullMode::monte_carlo;
  throw InvalidArgument("unknown null mode '" + text + "' (expected exhaustive or monte_carlo)");
}

namespace {

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

void check_sizes(std::size_t n_minus, std::size_t n_plus) {
  if (n_minus == 0 || n_plus == 0) throw InvalidArgument("null distribution: n_- and n_+ must be >= 1");
  if (n_minus + n_plus > (std::size_t{1} << 31)) throw InvalidArgument("null distribution: sample too large");
}

// Sorts values and merges atoms that agree up to rounding.
void collapse(std::vector<std::pair<double, double>>& atoms, std::vector<double>& support,
              std::vector<double>& weights) {
  std::sort(atoms.begin(), atoms.end());
  for (const auto& [v, w] : atoms) {
    if (!support.empty() && v - support.back() <= 1e-12 * std::max(1.0, std::abs(v))) {
      weights.back() += w;
    } else {
      support.push_back(v);
      weights.push_back(w);
    }
  }
}

double lattice_work(std::size_t n, std::size_t n_plus, std::size_t max_sum) {
  return static_cast<double>(n) * static_cast<double>(n_plus) * static_cast<double>(max_sum + 1) / 2.0;
}

std::vector<std::size_t> lattice_weights(std::size_t n, const ScoreGenFn& phi) {
  const double denom = static_cast<double>(n + 1);
  std::vector<std::size_t> w(n);
  for (std::size_t r = 1; r <= n; ++r) {
    w[r - 1] = static_cast<std::size_t>(std::llround(phi(static_cast<double>(r) / denom) * denom));
  }
  return w;
}

std::size_t lattice_max_sum(const std::vector<std::size_t>& w, std::size_t n_plus) {
  // ranks carry nondecreasing weights, so the top n_plus ranks give the maximum
  return std::accumulate(w.end() - static_cast<std::ptrdiff_t>(n_plus), w.end(), std::size_t{0});
}

bool lattice_fits(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi) {
  const std::size_t n = n_minus + n_plus;
  return lattice_work(n, n_plus, lattice_max_sum(lattice_weights(n, phi), n_plus)) <= kLatticeBudget;
}

NullDistribution build_lattice(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi) {
  const std::size_t n = n_minus + n_plus;
  const double denom = static_cast<double>(n + 1);
  const auto w = lattice_weights(n, phi);
  const std::size_t max_sum = lattice_max_sum(w, n_plus);
  const std::size_t width = max_sum + 1;
  if (lattice_work(n, n_plus, max_sum) > kLatticeBudget) {
    throw BudgetExceeded("null distribution: rank-sum table for n=" + std::to_string(n) + ", n_+=" +
                         std::to_string(n_plus) + " exceeds the work budget; use monte_carlo");
  }
  // prob[k * width + s]: probability that a uniform k-subset of the ranks seen
  // so far has weight sum s. Kept normalized so that C(n, n_+) cannot overflow.
  std::vector<double> prob((n_plus + 1) * width, 0.0);
  prob[0] = 1.0;
  std::size_t reach = 0;  // largest sum reachable so far
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t wr = w[r];
    const double seen = static_cast<double>(r + 1);
    reach = std::min(max_sum, reach + wr);
    // layers that can still grow to n_plus with the remaining n - r - 1 ranks
    const std::size_t k_lo = n_plus + r + 1 > n ? n_plus + r + 1 - n : 0;
    for (std::size_t k = std::min(r + 1, n_plus); k >= std::max<std::size_t>(k_lo, 1); --k) {
      double* dst = &prob[k * width];
      const double* src = &prob[(k - 1) * width];
      const double keep = (seen - static_cast<double>(k)) / seen;
      const double take = static_cast<double>(k) / seen;
      for (std::size_t s = reach + 1; s-- > 0;) dst[s] = keep * dst[s] + (s >= wr ? take * src[s - wr] : 0.0);
    }
  }
  std::vector<std::pair<double, double>> atoms;
  const double* top = &prob[n_plus * width];
  const double kp = static_cast<double>(n_plus);
  for (std::size_t s = 0; s < width; ++s) {
    if (top[s] > 0.0) atoms.emplace_back(static_cast<double>(s) / denom / kp - phi.integral_0_1(), top[s]);
  }
  std::vector<double> support, weights;
  collapse(atoms, support, weights);
  return NullDistribution(n_minus, n_plus, phi.label(), NullMode::exhaustive, 0, 0, std::move(support),
                          std::move(weights));
}

}  // namespace

NullDistribution::NullDistribution(std::size_t n_minus, std::size_t n_plus, std::string phi_label, NullMode mode,
                                   std::size_t m_draws, std::uint64_t seed, std::vector<double> support,
                                   std::vector<double> weights)
    : n_minus_(n_minus),
      n_plus_(n_plus),
      phi_label_(std::move(phi_label)),
      mode_(mode),
      m_draws_(m_draws),
      seed_(seed),
      support_(std::move(support)),
      weights_(std::move(weights)) {
  if (support_.empty() || support_.size() != weights_.size()) {
    throw InvalidArgument("NullDistribution: support and weights must be nonempty and aligned");
  }
  if (!std::is_sorted(support_.begin(), support_.end())) throw InvalidArgument("NullDistribution: unsorted support");
  tail_weight_.assign(support_.size() + 1, 0.0);
  for (std::size_t i = support_.size(); i-- > 0;) tail_weight_[i] = tail_weight_[i + 1] + weights_[i];
  if (!(tail_weight_.front() > 0.0)) throw InvalidArgument("NullDistribution: zero total weight");
}

std::vector<double> NullDistribution::probabilities() const {
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights_[i] / total_weight();
  return p;
}

std::size_t NullDistribution::first_at_least(double t) const {
  return static_cast<std::size_t>(std::lower_bound(support_.begin(), support_.end(), t) - support_.begin());
}

double NullDistribution::cdf(double t) const { return 1.0 - prob_greater(t); }

double NullDistribution::prob_greater(double t) const {
  auto i = static_cast<std::size_t>(std::upper_bound(support_.begin(), support_.end(), t + kStatisticTolerance) -
                                    support_.begin());
  return tail_weight_[i] / total_weight();
}

double NullDistribution::prob_at_least(double t) const {
  return tail_weight_[first_at_least(t - kStatisticTolerance)] / total_weight();
}

double NullDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) m += support_[i] * weights_[i];
  return m / total_weight();
}

NullDistribution build_null_by_enumeration(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi) {
  check_sizes(n_minus, n_plus);
  const std::size_t n = n_minus + n_plus;
  if (log_binomial(n, n_plus) > std::log(kExhaustiveBudget) + 1e-9) {
    throw BudgetExceeded("exhaustive null: C(" + std::to_string(n) + ", " + std::to_string(n_plus) +
                         ") exceeds the enumeration budget; use monte_carlo mode");
  }
  const double denom = static_cast<double>(n + 1);
  std::vector<double> phi_at(n);
  for (std::size_t r = 0; r < n; ++r) phi_at[r] = phi(static_cast<double>(r + 1) / denom);

  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(static_cast<std::size_t>(std::exp(log_binomial(n, n_plus))) + 1);
  std::vector<std::size_t> pick(n_plus);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  const double kp = static_cast<double>(n_plus);
  for (;;) {
    double sum = 0.0;
    for (std::size_t r : pick) sum += phi_at[r];
    atoms.emplace_back(sum / kp - phi.integral_0_1(), 1.0);
    // Next combination in lexicographic order.
    std::size_t i = n_plus;
    while (i > 0 && pick[i - 1] == n - n_plus + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n_plus; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::vector<double> support, weights;
  collapse(atoms, support, weights);
  return NullDistribution(n_minus, n_plus, phi.label(), NullMode::exhaustive, 0, 0, std::move(support),
                          std::move(weights));
}

NullDistribution build_null(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi, NullMode mode,
                            std::size_t m_draws, RngStream& rng) {
  check_sizes(n_minus, n_plus);
  if (mode == NullMode::exhaustive) {
    return phi.is_rank_lattice() ? build_lattice(n_minus, n_plus, phi)
                                 : build_null_by_enumeration(n_minus, n_plus, phi);
  }
  if (m_draws < 1000) throw InvalidArgument("monte_carlo null: m_draws must be >= 1000");
  const std::size_t n = n_minus + n_plus;
  const double denom = static_cast<double>(n + 1);
  const double kp = static_cast<double>(n_plus);
  std::vector<double> phi_at(n);
  for (std::size_t r = 0; r < n; ++r) phi_at[r] = phi(static_cast<double>(r + 1) / denom);
  std::vector<std::size_t> slots(n);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(m_draws);
  for (std::size_t m = 0; m < m_draws; ++m) {
    // Partial Fisher-Yates: the first n_plus slots form a uniform subset.
    double sum = 0.0;
    for (std::size_t i = 0; i < n_plus; ++i) {
      std::swap(slots[i], slots[i + rng.uniform_index(n - i)]);
      sum += phi_at[slots[i]];
    }
    atoms.emplace_back(sum / kp - phi.integral_0_1(), 1.0);
  }
  std::vector<double> support, weights;
  collapse(atoms, support, weights);
  return NullDistribution(n_minus, n_plus, phi.label(), NullMode::monte_carlo, m_draws, rng.master_seed(),
                          std::move(support), std::move(weights));
}

double quantile(const NullDistribution& dist, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("quantile: alpha must lie in (0, 1)");
  const auto& support = dist.support();
  const auto& w = dist.weights();
  const double total = dist.total_weight();
  // Walk from the top: the tail above support[i] is the weight of atoms i+1..end.
  double above = 0.0;
  std::size_t i = support.size() - 1;
  while (i > 0 && (above + w[i]) / total <= alpha) {
    above += w[i];
    --i;
  }
  return support[i];
}

double p_value(const NullDistribution& dist, double observed) {
  if (std::isnan(observed)) throw InvalidArgument("p_value: observed statistic is NaN");
  const double tail = dist.prob_at_least(observed);
  if (dist.mode() == NullMode::monte_carlo) {
    const double m = static_cast<double>(dist.m_draws());
    const double count = std::round(tail * m);
    return (1.0 + count) / (m + 1.0);
  }
  return tail;
}

double p_value(const NullDistribution& dist, const RankVector& ranks, const ScoreGenFn& phi) {
  if (ranks.n_plus() != dist.n_plus() || ranks.n_minus() != dist.n_minus()) {
    throw InvalidArgument("p_value: null table built for (" + std::to_string(dist.n_minus()) + ", " +
                          std::to_string(dist.n_plus()) + ") but ranks have (" + std::to_string(ranks.n_minus()) +
                          ", " + std::to_string(ranks.n_plus()) + ")");
  }
  if (phi.label() != dist.phi_label()) {
    throw InvalidArgument("p_value: null table built for phi " + dist.phi_label() + ", not " + phi.label());
  }
  return p_value(dist, normalized_statistic(ranks, phi));
}

double level_constant(double p, const ScoreGenFn& phi) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("level_constant: p must lie in (0, 1)");
  const auto dphi = phi.sup_phi_prime();
  if (!phi.is_smooth() || !dphi) {
    throw UnsupportedPhi("phi " + phi.label() + " is not C^2; the closed-form constant is undefined");
  }
  const double s = phi.sup_phi();
  const double d2 = *dphi * *dphi;
  return std::min({p / (s * s), 1.0 / (p * d2), 1.0 / ((1.0 - p) * d2)}) / 8.0;
}

double quantile_upper_bound(double alpha, std::size_t n, double p, const ScoreGenFn& phi) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("quantile_upper_bound: alpha must lie in (0, 1)");
  if (static_cast<double>(n) * p < 1.0) throw InvalidArgument("quantile_upper_bound: need n >= 1/p");
  const double c = level_constant(p, phi);
  return std::sqrt(std::log(18.0 / alpha) / (c * static_cast<double>(n)));
}

NullMode choose_null_mode(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi) {
  if (phi.is_rank_lattice()) return lattice_fits(n_minus, n_plus, phi) ? NullMode::exhaustive : NullMode::monte_carlo;
  return log_binomial(n_minus + n_plus, n_plus) <= std::log(kExhaustiveBudget) ? NullMode::exhaustive
                                                                                : NullMode::monte_carlo;
}

void write_null_csv(const NullDistribution& dist, std::ostream& out) {
  out << "value,probability\n";
  char buf[64];
  const auto probs = dist.probabilities();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", dist.support()[i], probs[i]);
    out << buf;
  }
}

namespace {

nlohmann::json table_header(const NullDistribution& d) {
  return {{"n_minus", d.n_minus()}, {"n_plus", d.n_plus()}, {"phi", d.phi_label()},
          {"mode", to_string(d.mode())}, {"m_draws", d.m_draws()}, {"seed", d.seed()},
          {"total_weight", d.total_weight()}};
}

}  // namespace

void write_null_table(const NullDistribution& dist, const std::string& path) {
  static std::atomic<unsigned> counter{0};
  const std::string tmp = path + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
                          "_" + std::to_string(counter++);
  {
    std::ofstream out(tmp);
    if (!out) throw InvalidArgument("cannot write null table to " + tmp);
    out << table_header(dist).dump() << "\n";
    out << "value,weight\n";
    char buf[64];
    for (std::size_t i = 0; i < dist.support().size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", dist.support()[i], dist.weights()[i]);
      out << buf;
    }
  }
  std::filesystem::rename(tmp, path);
}

NullDistribution read_null_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open null table " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("null table " + path + ": bad header: " + e.what());
  }
  std::getline(in, line);
  std::vector<double> support, weights;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("null table " + path + ": bad row '" + line + "'");
    support.push_back(std::stod(line.substr(0, comma)));
    weights.push_back(std::stod(line.substr(comma + 1)));
  }
  return NullDistribution(header.at("n_minus").get<std::size_t>(), header.at("n_plus").get<std::size_t>(),
                          header.at("phi").get<std::string>(), parse_null_mode(header.at("mode").get<std::string>()),
                          header.at("m_draws").get<std::size_t>(), header.at("seed").get<std::uint64_t>(),
                          std::move(support), std::move(weights));
}

std::shared_ptr<const NullDistribution> cached_null(std::size_t n_minus, std::size_t n_plus, const ScoreGenFn& phi,
                                                    NullMode mode, std::size_t m_draws, std::uint64_t seed) {
  if (mode == NullMode::exhaustive) {
    m_draws = 0;
    seed = 0;
  }
  using Key = std::tuple<std::size_t, std::size_t, std::string, NullMode, std::size_t, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const NullDistribution>> memo;
  const Key key{n_minus, n_plus, phi.label(), mode, m_draws, seed};
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }

  std::string file;
  if (const char* dir = std::getenv("RANKINDEP_CACHE_DIR"); dir && *dir) {
    std::string label = phi.label();
    std::replace(label.begin(), label.end(), ':', '_');
    std::ostringstream name;
    name << "null_" << n_minus << "_" << n_plus << "_" << label << "_" << to_string(mode) << "_" << m_draws << "_"
         << seed << ".csv";
    std::filesystem::create_directories(dir);
    file = (std::filesystem::path(dir) / name.str()).string();
  }

  std::shared_ptr<const NullDistribution> table;
  if (!file.empty() && std::filesystem::exists(file)) {
    try {
      auto loaded = read_null_table(file);
      if (loaded.n_minus() == n_minus && loaded.n_plus() == n_plus && loaded.phi_label() == phi.label() &&
          loaded.mode() == mode) {
        table = std::make_shared<const NullDistribution>(std::move(loaded));
      }
    } catch (const std::exception&) {
      table.reset();  // unreadable cache entry: rebuild below
    }
  }
  if (!table) {
    RngStream rng(seed, 0x6e756c6cULL);
    table = std::make_shared<const NullDistribution>(build_null(n_minus, n_plus, phi, mode, m_draws, rng));
    if (!file.empty()) write_null_table(*table, file);
  }
  std::lock_guard lock(mutex);
  return memo.emplace(key, table).first->second;
}

}  // namespace rankindep
