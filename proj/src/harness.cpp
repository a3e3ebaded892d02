#include "rankindep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "rankindep/parallel.hpp"
#include "rankindep/ranking.hpp"
#include "rankindep/svg.hpp"

namespace rankindep {

namespace {

const char* kVersion = "1.0.0";

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

std::vector<double> number_or_array(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

ForestConfig forest_from_json(const nlohmann::json& j, ForestConfig cfg) {
  cfg.n_trees = j.value("n_trees", cfg.n_trees);
  cfg.max_depth = j.value("max_depth", cfg.max_depth);
  cfg.min_leaf = j.value("min_leaf", cfg.min_leaf);
  cfg.feature_subsample = j.value("feature_subsample", cfg.feature_subsample);
  cfg.bootstrap = j.value("bootstrap", cfg.bootstrap);
  cfg.lookahead = j.value("lookahead", cfg.lookahead);
  cfg.lookahead_thresholds = j.value("lookahead_thresholds", cfg.lookahead_thresholds);
  return cfg;
}

bool is_ranking(MethodSpec::Family f) { return f != MethodSpec::Family::baseline; }

}  // namespace

// ---------------------------------------------------------------------------
// Plan parsing.
// ---------------------------------------------------------------------------

MethodSpec MethodSpec::from_json(const nlohmann::json& j) {
  const std::string id = j.at("id").get<std::string>();
  MethodSpec m;
  if (id == "rforest" || id == "rtree" || id == "oracle") {
    m.family = id == "rforest" ? Family::rforest : id == "rtree" ? Family::rtree : Family::oracle;
    TestConfig& t = m.test;
    t.learner = m.family == Family::rtree ? Learner::tree : Learner::forest;
    t.phi = parse_phi(j.value("phi", std::string("mww")));
    t.k_p = j.value("kp", t.k_p);
    t.learn_fraction = j.value("learn_fraction", t.learn_fraction);
    t.p = j.value("p", t.p);
    t.pre_shuffle = j.value("pre_shuffle", t.pre_shuffle);
    t.derangement = j.value("derangement", t.derangement);
    if (j.contains("null_mode")) t.null_mode = parse_null_mode(j.at("null_mode").get<std::string>());
    t.null_draws = j.value("null_draws", t.null_draws);
    if (j.contains("forest")) t.forest = forest_from_json(j.at("forest"), t.forest);
    if (m.family == Family::rtree && !j.contains("forest")) t.forest.n_trees = 1;
    m.label = j.value("label", id + "-" + t.phi.label());
  } else {
    m.family = Family::baseline;
    m.baseline.method = parse_baseline_method(id);
    m.baseline.k0 = j.value("k0", m.baseline.k0);
    m.label = j.value("label", std::string(to_string(m.baseline.method)));
  }
  return m;
}

MethodSpec MethodSpec::parse(const std::string& id) {
  for (const char* family : {"rforest", "rtree", "oracle"}) {
    const std::string prefix = std::string(family) + "-";
    if (id.rfind(prefix, 0) == 0) return from_json({{"id", family}, {"phi", id.substr(prefix.size())}});
    if (id == family) return from_json({{"id", family}});
  }
  return from_json({{"id", id}});
}

nlohmann::json MethodSpec::to_json() const {
  if (family == Family::baseline) return {{"id", to_string(baseline.method)}, {"k0", baseline.k0}, {"label", label}};
  const char* id = family == Family::rforest ? "rforest" : family == Family::rtree ? "rtree" : "oracle";
  nlohmann::json j = {{"id", id},
                      {"label", label},
                      {"phi", test.phi.label()},
                      {"kp", test.k_p},
                      {"learn_fraction", test.learn_fraction},
                      {"p", test.p},
                      {"pre_shuffle", test.pre_shuffle},
                      {"derangement", test.derangement},
                      {"null_draws", test.null_draws},
                      {"forest",
                       {{"n_trees", test.forest.n_trees},
                        {"max_depth", test.forest.max_depth},
                        {"min_leaf", test.forest.min_leaf},
                        {"feature_subsample", test.forest.feature_subsample},
                        {"bootstrap", test.forest.bootstrap},
                        {"lookahead", test.forest.lookahead},
                        {"lookahead_thresholds", test.forest.lookahead_thresholds}}}};
  if (test.null_mode) j["null_mode"] = to_string(*test.null_mode);
  return j;
}

std::string DataCell::label() const {
  std::ostringstream os;
  os << to_string(model.model_id) << "_d" << model.d() << "_rho" << model.rho << "_N" << n_total;
  return os.str();
}

void ExperimentPlan::validate() const {
  if (b < 1) throw InvalidArgument("plan: b must be >= 1");
  if (cells.empty()) throw InvalidArgument("plan: no model cells");
  if (methods.empty()) throw InvalidArgument("plan: no methods");
  if (alphas.empty()) throw InvalidArgument("plan: empty alpha grid");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) throw InvalidArgument("plan: alphas must lie in (0, 1)");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) throw InvalidArgument("plan: alphas must be strictly increasing");
  }
  if (jobs < 1) throw InvalidArgument("plan: jobs must be >= 1");
}

ExperimentPlan ExperimentPlan::from_json(const nlohmann::json& j) {
  ExperimentPlan plan;
  plan.name = j.value("name", plan.name);
  plan.b = j.value("b", plan.b);
  if (j.contains("alphas")) plan.alphas = j.at("alphas").get<std::vector<double>>();
  plan.output_dir = j.value("output_dir", plan.output_dir);
  plan.seed = j.value("seed", plan.seed);
  plan.jobs = j.value("jobs", plan.jobs);
  for (const auto& m : j.at("models")) {
    const ModelId id = parse_model_id(m.at("model").get<std::string>());
    const std::size_t d = m.value("d", std::size_t{2});
    const auto rhos = number_or_array(m.at("rho"));
    std::vector<double> ns = m.contains("n") ? number_or_array(m.at("n")) : std::vector<double>{500};
    for (double n : ns) {
      for (double rho : rhos) {
        DataCell cell;
        cell.model = ModelSpec::make(id, d, rho);
        cell.model.scaled = m.value("scaled", true);
        cell.model.u = m.value("u", std::size_t{1});
        if (!(n >= 2 && n == std::floor(n))) throw InvalidArgument("plan: n must be an integer >= 2");
        cell.n_total = static_cast<std::size_t>(n);
        plan.cells.push_back(cell);
      }
    }
  }
  for (const auto& m : j.at("methods")) {
    plan.methods.push_back(m.is_string() ? MethodSpec::parse(m.get<std::string>()) : MethodSpec::from_json(m));
  }
  plan.validate();
  return plan;
}

nlohmann::json ExperimentPlan::to_json() const {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& c : cells) {
    models.push_back({{"model", to_string(c.model.model_id)},
                      {"d", c.model.d()},
                      {"rho", c.model.rho},
                      {"n", c.n_total},
                      {"scaled", c.model.scaled},
                      {"u", c.model.u}});
  }
  nlohmann::json methods_json = nlohmann::json::array();
  for (const auto& m : methods) methods_json.push_back(m.to_json());
  return {{"name", name}, {"models", models}, {"methods", methods_json}, {"b", b},
          {"alphas", alphas}, {"output_dir", output_dir}, {"seed", seed}, {"jobs", jobs}};
}

const char* to_string(Accounting a) noexcept { return a == Accounting::per_draw ? "per_draw" : "per_replicate"; }

double rejection_rate(const std::vector<double>& p_values, double alpha) {
  if (p_values.empty()) return 0.0;
  const auto k = std::count_if(p_values.begin(), p_values.end(), [&](double p) { return p <= alpha; });
  return static_cast<double>(k) / static_cast<double>(p_values.size());
}

// ---------------------------------------------------------------------------
// Experiment execution.
// ---------------------------------------------------------------------------

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "model,d,n_total,rho,method,accounting,alpha,rejection_rate,ci_half_width,std_dev,b_effective,seed\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.d << ',' << r.n_total << ',' << fmt("%.6g", r.rho) << ',' << r.method << ','
        << to_string(r.accounting) << ',' << fmt("%.6g", r.alpha) << ',' << fmt("%.6f", r.rejection_rate) << ','
        << fmt("%.6f", r.ci_half_width) << ',' << fmt("%.6f", r.std_dev) << ',' << r.b_effective << ',' << r.seed
        << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentPlan& plan, bool write_files) {
  plan.validate();
  const std::size_t n_cells = plan.cells.size();
  const std::size_t n_methods = plan.methods.size();
  const std::size_t b = plan.b;

  std::vector<std::vector<CellPValues>> pvals(n_cells, std::vector<CellPValues>(n_methods));
  for (auto& cell : pvals) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      cell[m].per_draw.assign(b, std::nan(""));
      if (is_ranking(plan.methods[m].family)) cell[m].per_replicate.assign(b * plan.methods[m].test.k_p, std::nan(""));
    }
  }
  std::vector<double> seconds(n_cells * n_methods * b, 0.0);
  std::vector<std::string> cell_error(n_cells);
  std::mutex error_mutex;

  // Oracles are fixed per cell; a cell whose model has none fails for oracle methods.
  std::vector<std::optional<ScoringModel>> oracles(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    for (const auto& m : plan.methods) {
      if (m.family != MethodSpec::Family::oracle) continue;
      try {
        oracles[c] = oracle_for_model(plan.cells[c].model);
      } catch (const std::exception& e) {
        cell_error[c] = e.what();
      }
      break;
    }
  }

  parallel_for(n_cells * b, plan.jobs, [&](std::size_t task) {
    const std::size_t c = task / b;
    const std::size_t draw = task % b;
    {
      std::lock_guard lock(error_mutex);
      if (!cell_error[c].empty()) return;
    }
    try {
      const RngStream draw_rng = RngStream(plan.seed, c).substream(draw);
      RngStream data_rng = draw_rng.substream(0);
      const PairedDataset data = sample_model(plan.cells[c].model, plan.cells[c].n_total, data_rng);
      for (std::size_t m = 0; m < n_methods; ++m) {
        const MethodSpec& method = plan.methods[m];
        RngStream method_rng = draw_rng.substream(1 + m);
        const auto start = std::chrono::steady_clock::now();
        CellPValues& out = pvals[c][m];
        if (method.family == MethodSpec::Family::baseline) {
          out.per_draw[draw] = permutation_test(data, method.baseline, method_rng).p_value;
        } else {
          const TestOutcome o = method.family == MethodSpec::Family::oracle
                                    ? run_test_with_oracle(data, method.test, *oracles[c], method_rng)
                                    : run_test(data, method.test, method_rng);
          out.per_draw[draw] = o.p_value;
          for (std::size_t r = 0; r < o.per_replicate.size(); ++r) {
            out.per_replicate[draw * method.test.k_p + r] = o.per_replicate[r].p_value;
          }
        }
        seconds[(c * n_methods + m) * b + draw] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    } catch (const std::exception& e) {
      std::lock_guard lock(error_mutex);
      if (cell_error[c].empty()) cell_error[c] = e.what();
    }
  });

  ExperimentResult result;
  nlohmann::json cells_json = nlohmann::json::array();
  std::vector<std::string> timing_lines;
  for (std::size_t c = 0; c < n_cells; ++c) {
    const DataCell& cell = plan.cells[c];
    nlohmann::json cj = {{"cell", cell.label()}, {"stream", c}};
    if (!cell_error[c].empty()) {
      cj["status"] = "failed";
      cj["error"] = cell_error[c];
      cells_json.push_back(cj);
      continue;
    }
    cj["status"] = "ok";
    cells_json.push_back(cj);
    std::vector<PlotSeries> series;
    for (std::size_t m = 0; m < n_methods; ++m) {
      const MethodSpec& method = plan.methods[m];
      double total_seconds = 0.0;
      for (std::size_t draw = 0; draw < b; ++draw) total_seconds += seconds[(c * n_methods + m) * b + draw];
      timing_lines.push_back(cell.label() + "," + method.label + "," + fmt("%.3f", total_seconds));

      std::vector<Accounting> accountings{Accounting::per_draw};
      if (is_ranking(method.family)) accountings.push_back(Accounting::per_replicate);
      PlotSeries ser{method.label, {}, {}};
      for (Accounting acc : accountings) {
        const auto& ps = acc == Accounting::per_draw ? pvals[c][m].per_draw : pvals[c][m].per_replicate;
        for (double alpha : plan.alphas) {
          ResultRow row;
          row.model = to_string(cell.model.model_id);
          row.d = cell.model.d();
          row.n_total = cell.n_total;
          row.rho = cell.model.rho;
          row.method = method.label;
          row.accounting = acc;
          row.alpha = alpha;
          row.rejection_rate = rejection_rate(ps, alpha);
          row.b_effective = ps.size();
          const double r = row.rejection_rate;
          row.std_dev = std::sqrt(r * (1.0 - r));
          row.ci_half_width = 1.96 * std::sqrt(r * (1.0 - r) / static_cast<double>(row.b_effective));
          row.runtime_seconds = total_seconds;
          row.seed = plan.seed;
          result.rows.push_back(row);
          if (acc == Accounting::per_draw) {
            ser.x.push_back(alpha);
            ser.y.push_back(r);
          }
        }
      }
      series.push_back(std::move(ser));
    }
    if (write_files) {
      std::filesystem::create_directories(plan.output_dir);
      const std::string title = cell.label() + " (B=" + std::to_string(b) + ")";
      write_text_file((std::filesystem::path(plan.output_dir) / ("power_" + sanitize(cell.label()) + ".svg")).string(),
                      render_unit_plot(title, "significance level alpha", "rejection rate", series, true));
    }
  }

  result.manifest = {{"plan", plan.to_json()},
                     {"cells", cells_json},
                     {"versions", {{"rankindep", kVersion}, {"compiler", __VERSION__}, {"cxx", __cplusplus}}},
                     {"seeding", "dataset of (cell c, draw b): RngStream(seed, c).substream(b).substream(0); "
                                 "method m: ...substream(1 + m)"}};

  if (write_files) {
    const std::filesystem::path dir(plan.output_dir);
    std::filesystem::create_directories(dir);
    std::ostringstream csv;
    write_results_csv(result.rows, csv);
    write_text_file((dir / "results.csv").string(), csv.str());
    std::string timings = "cell,method,runtime_seconds\n";
    for (const auto& line : timing_lines) timings += line + "\n";
    write_text_file((dir / "timings.csv").string(), timings);
    write_text_file((dir / "manifest.json").string(), result.manifest.dump(2) + "\n");
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV ingestion.
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const std::vector<std::string>& x_columns,
                        const std::vector<std::string>& y_columns, const IngestOptions& options) {
  if (x_columns.empty() || y_columns.empty()) throw InvalidArgument("ingest_csv: need at least one X and one Y column");
  std::ifstream in(path);
  if (!in) throw InvalidArgument("ingest_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw EmptyData("ingest_csv: '" + path + "' is empty");
  const auto header = split_csv_line(line);
  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw InvalidArgument("ingest_csv: column '" + name + "' not found in '" + path + "'");
  };
  std::vector<std::size_t> xi, yi;
  for (const auto& c : x_columns) xi.push_back(column_index(c));
  for (const auto& c : y_columns) yi.push_back(column_index(c));
  std::optional<std::size_t> strat;
  if (options.stratify_by) strat = column_index(*options.stratify_by);

  std::vector<double> xs, ys;
  std::vector<std::string> groups;
  std::size_t read = 0, dropped = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++read;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    bool ok = true;
    for (const auto& idx : {std::cref(xi), std::cref(yi)}) {
      for (std::size_t i : idx.get()) {
        const auto v = i < fields.size() ? parse_number(fields[i]) : std::nullopt;
        if (!v) {
          ok = false;
          break;
        }
        row.push_back(*v);
      }
      if (!ok) break;
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    xs.insert(xs.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(xi.size()));
    ys.insert(ys.end(), row.begin() + static_cast<std::ptrdiff_t>(xi.size()), row.end());
    if (strat) groups.push_back(*strat < fields.size() ? trim(fields[*strat]) : "");
  }
  std::size_t usable = xs.size() / xi.size();
  if (usable == 0) throw EmptyData("ingest_csv: no usable rows in '" + path + "'");

  std::vector<std::size_t> keep(usable);
  for (std::size_t i = 0; i < usable; ++i) keep[i] = i;
  if (options.subsample && *options.subsample < usable) {
    const std::size_t target = *options.subsample;
    RngStream rng(options.seed, 0x696e67657374ULL);
    if (!strat) {
      for (std::size_t i = 0; i < target; ++i) std::swap(keep[i], keep[i + rng.uniform_index(usable - i)]);
      keep.resize(target);
    } else {
      // Largest-remainder allocation of the target across the groups.
      std::map<std::string, std::vector<std::size_t>> by_group;
      for (std::size_t i = 0; i < usable; ++i) by_group[groups[i]].push_back(i);
      std::vector<std::pair<double, std::string>> remainders;
      std::map<std::string, std::size_t> quota;
      std::size_t assigned = 0;
      for (const auto& [g, rows] : by_group) {
        const double exact = static_cast<double>(target) * static_cast<double>(rows.size()) / static_cast<double>(usable);
        quota[g] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[g];
        remainders.emplace_back(exact - std::floor(exact), g);
      }
      std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t k = 0; assigned < target; ++k, ++assigned) ++quota[remainders[k].second];
      keep.clear();
      for (auto& [g, rows] : by_group) {
        const std::size_t q = quota[g];
        for (std::size_t i = 0; i < q; ++i) std::swap(rows[i], rows[i + rng.uniform_index(rows.size() - i)]);
        keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(q));
      }
      std::sort(keep.begin(), keep.end());
    }
  }

  Matrix x(keep.size(), xi.size()), y(keep.size(), yi.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t k = 0; k < xi.size(); ++k) x(r, k) = xs[keep[r] * xi.size() + k];
    for (std::size_t k = 0; k < yi.size(); ++k) y(r, k) = ys[keep[r] * yi.size() + k];
  }
  if (keep.size() < 2) throw EmptyData("ingest_csv: fewer than 2 usable rows in '" + path + "'");
  return IngestResult{PairedDataset(std::move(x), std::move(y)), read, dropped};
}

void write_dataset_csv(const PairedDataset& data, std::ostream& out) {
  for (std::size_t k = 0; k < data.dim_x(); ++k) out << (k ? "," : "") << 'x' << k + 1;
  for (std::size_t k = 0; k < data.dim_y(); ++k) out << ",y" << k + 1;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t k = 0; k < data.dim_x(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", data.x()(i, k));
      out << (k ? "," : "") << buf;
    }
    for (std::size_t k = 0; k < data.dim_y(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", data.y()(i, k));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace rankindep
