// rankindep command-line interface.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "rankindep/baselines.hpp"
#include "rankindep/bounds.hpp"
#include "rankindep/harness.hpp"
#include "rankindep/nulldist.hpp"
#include "rankindep/roc.hpp"
#include "rankindep/svg.hpp"
#include "rankindep/testproc.hpp"

using namespace rankindep;

namespace {

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

struct GenerateArgs {
  std::string model = "GL";
  std::size_t d = 4;
  double rho = 0.0;
  std::size_t n = 500;
  std::size_t u = 1;
  bool unscaled = false;
  std::uint64_t seed = 1;
  std::string out;
};

struct TestArgs {
  std::string input;
  std::vector<std::string> xcols, ycols;
  std::string method = "rforest";
  std::string phi = "mww";
  double alpha = 0.05;
  std::size_t kp = 10;
  std::size_t k0 = 200;
  std::uint64_t seed = 1;
  double learn_fraction = 0.8;
  double p = 0.5;
  std::size_t trees = 100, max_depth = 8, min_leaf = 5, features = 0;
  std::string null_mode;
  std::size_t null_draws = 100000;
  std::size_t jobs = 1;
  std::size_t subsample = 0;
  std::string stratify;
  std::string output;
  std::string replicates_csv;
};

struct ExperimentArgs {
  std::string plan;
  std::string output_dir;
  std::size_t jobs = 0;
  std::size_t b = 0;
};

struct NullArgs {
  std::size_t n_minus = 5, n_plus = 5;
  std::string phi = "mww";
  std::string mode = "exhaustive";
  std::size_t draws = 100000;
  std::uint64_t seed = 1;
  std::vector<double> alphas;
  std::string out;
};

struct RocArgs {
  std::string model = "GL";
  std::size_t d = 10;
  std::vector<double> rhos{0.0, 0.05, 0.1, 0.15, 0.2};
  std::size_t m = 100000;
  std::uint64_t seed = 1;
  std::string csv_prefix = "roc";
  std::string svg;
};

struct BoundsArgs {
  std::size_t n_prime = 2000;
  double p = 0.5;
  std::string phi = "mww";
  double epsilon = 0.2, delta = 0.0;
  double alpha = 0.0;
  std::string model;
  std::size_t d = 4;
  double rho = 0.0;
  std::size_t m = 100000;
  std::uint64_t seed = 1;
};

int run_generate(const GenerateArgs& a) {
  ModelSpec spec = ModelSpec::make(parse_model_id(a.model), a.d, a.rho);
  spec.u = a.u;
  spec.scaled = !a.unscaled;
  RngStream rng(a.seed, 0);
  std::ostringstream os;
  write_dataset_csv(sample_model(spec, a.n, rng), os);
  emit(a.out, os.str());
  return 0;
}

int run_test_cmd(const TestArgs& a) {
  IngestOptions opts;
  if (a.subsample > 0) opts.subsample = a.subsample;
  if (!a.stratify.empty()) opts.stratify_by = a.stratify;
  opts.seed = a.seed;
  const IngestResult in = ingest_csv(a.input, a.xcols, a.ycols, opts);
  if (in.rows_dropped > 0) std::cerr << "warning: dropped " << in.rows_dropped << " rows with missing or non-numeric values\n";
  RngStream rng(a.seed, 0);
  nlohmann::json doc;
  const std::string method = a.method;
  if (method == "rforest" || method == "rtree") {
    TestConfig cfg;
    cfg.phi = parse_phi(a.phi);
    cfg.alpha = a.alpha;
    cfg.k_p = a.kp;
    cfg.learn_fraction = a.learn_fraction;
    cfg.p = a.p;
    cfg.learner = method == "rtree" ? Learner::tree : Learner::forest;
    cfg.forest.n_trees = method == "rtree" ? 1 : a.trees;
    cfg.forest.max_depth = a.max_depth;
    cfg.forest.min_leaf = a.min_leaf;
    cfg.forest.feature_subsample = a.features;
    if (!a.null_mode.empty()) cfg.null_mode = parse_null_mode(a.null_mode);
    cfg.null_draws = a.null_draws;
    cfg.jobs = a.jobs;
    const TestOutcome out = run_test(in.data, cfg, rng);
    doc = out.to_json();
    if (!a.replicates_csv.empty()) {
      std::ostringstream os;
      os << "replicate,statistic,p_value,reject,train_auc,test_auc\n";
      for (std::size_t r = 0; r < out.per_replicate.size(); ++r) {
        const auto& rep = out.per_replicate[r];
        os << r << ',' << rep.statistic << ',' << rep.p_value << ',' << (rep.reject ? 1 : 0) << ',' << rep.train_auc
           << ',' << rep.test_auc << '\n';
      }
      write_text_file(a.replicates_csv, os.str());
    }
  } else {
    BaselineConfig cfg;
    cfg.method = parse_baseline_method(method);
    cfg.k0 = a.k0;
    cfg.alpha = a.alpha;
    cfg.jobs = a.jobs;
    doc = permutation_test(in.data, cfg, rng).to_json();
  }
  doc["input"] = {{"path", a.input}, {"rows_read", in.rows_read}, {"rows_dropped", in.rows_dropped},
                  {"n", in.data.n()}, {"q", in.data.dim_x()}, {"l", in.data.dim_y()}};
  emit(a.output, doc.dump(2) + "\n");
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a) {
  std::ifstream in(a.plan);
  if (!in) throw InvalidArgument("cannot open plan file '" + a.plan + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  if (!a.output_dir.empty()) j["output_dir"] = a.output_dir;
  if (a.jobs > 0) j["jobs"] = a.jobs;
  if (a.b > 0) j["b"] = a.b;
  const ExperimentPlan plan = ExperimentPlan::from_json(j);
  const ExperimentResult res = run_experiment(plan);
  write_results_csv(res.rows, std::cout);
  for (const auto& c : res.manifest["cells"]) {
    if (c["status"] != "ok") std::cerr << "cell " << c["cell"].get<std::string>() << " failed: " << c["error"].get<std::string>() << "\n";
  }
  std::cerr << "wrote " << plan.output_dir << "/results.csv\n";
  return 0;
}

int run_null_cmd(const NullArgs& a) {
  const ScoreGenFn phi = parse_phi(a.phi);
  RngStream rng(a.seed, 0x6e756c6c);
  const NullDistribution dist = build_null(a.n_minus, a.n_plus, phi, parse_null_mode(a.mode), a.draws, rng);
  std::ostringstream os;
  write_null_csv(dist, os);
  emit(a.out, os.str());
  for (double alpha : a.alphas) std::cerr << "quantile(" << alpha << ") = " << quantile(dist, alpha) << "\n";
  return 0;
}

int run_roc_cmd(const RocArgs& a) {
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < a.rhos.size(); ++i) {
    const double rho = a.rhos[i];
    const ModelSpec spec = ModelSpec::make(parse_model_id(a.model), a.d, rho);
    RngStream rng(a.seed, i);
    const RocCurve curve = oracle_roc_monte_carlo(spec, oracle_for_model(spec), a.m, rng);
    std::ostringstream os;
    write_roc_csv(curve, os);
    std::ostringstream name;
    name << a.csv_prefix << "_rho" << rho << ".csv";
    write_text_file(name.str(), os.str());
    std::cout << "rho=" << rho << " auc=" << curve.auc << " -> " << name.str() << "\n";
    PlotSeries s;
    std::ostringstream label;
    label << "rho=" << rho;
    s.label = label.str();
    const auto g = curve.grid();
    for (std::size_t k = 0; k < g.size(); ++k) {
      s.x.push_back(static_cast<double>(k) / static_cast<double>(g.size() - 1));
      s.y.push_back(g[k]);
    }
    series.push_back(std::move(s));
  }
  if (!a.svg.empty()) {
    write_text_file(a.svg, render_unit_plot(a.model + " oracle ROC, d=" + std::to_string(a.d), "false positive rate",
                                            "true positive rate", series, true));
  }
  return 0;
}

int run_bounds_cmd(const BoundsArgs& a) {
  const ScoreGenFn phi = parse_phi(a.phi);
  const std::optional<double> alpha = a.alpha > 0.0 ? std::optional<double>(a.alpha) : std::nullopt;
  nlohmann::json doc = type2_first_term(a.n_prime, a.p, phi, a.epsilon, a.delta, alpha).to_json();
  if (alpha) doc["quantile_upper_bound"] = quantile_upper_bound(*alpha, a.n_prime, a.p, phi);
  if (!a.model.empty()) {
    const ModelSpec spec = ModelSpec::make(parse_model_id(a.model), a.d, a.rho);
    RngStream rng(a.seed, 0);
    const EpsilonEstimate e = epsilon_for_model(spec, phi, a.m, rng);
    doc["model_epsilon"] = {{"model", spec.label()}, {"epsilon", e.epsilon}, {"stderr", e.stderr_}, {"auc", e.auc}};
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranking-based independence testing"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample a synthetic dataset as CSV");
  g->add_option("--model", gen.model, "GL, GLplus, M1, M1s, M1d or GUMBEL");
  g->add_option("--d", gen.d, "total dimension q + l");
  g->add_option("--rho", gen.rho, "dependence parameter");
  g->add_option("--n", gen.n, "number of observations");
  g->add_option("--u", gen.u, "GLplus: dependent X coordinate (1-based)");
  g->add_flag("--unscaled", gen.unscaled, "GL/GLplus: do not divide the covariance by sqrt(d)");
  g->add_option("--seed", gen.seed);
  g->add_option("--out,-o", gen.out, "output CSV (default stdout)");

  TestArgs ta;
  auto* t = app.add_subcommand("test", "Test independence of two column blocks of a CSV file");
  t->add_option("--input,-i", ta.input)->required();
  t->add_option("--xcols", ta.xcols)->required()->delimiter(',');
  t->add_option("--ycols", ta.ycols)->required()->delimiter(',');
  t->add_option("--method", ta.method, "rforest, rtree, hsic, dcor-l1 or dcor-l2");
  t->add_option("--phi", ta.phi, "mww, rtb:<u0> or pow:<q>");
  t->add_option("--alpha", ta.alpha);
  t->add_option("--kp", ta.kp, "replicates of the ranking test");
  t->add_option("--k0", ta.k0, "permutations of the baselines");
  t->add_option("--seed", ta.seed);
  t->add_option("--learn-fraction", ta.learn_fraction);
  t->add_option("--p", ta.p, "positive proportion");
  t->add_option("--trees", ta.trees);
  t->add_option("--max-depth", ta.max_depth);
  t->add_option("--min-leaf", ta.min_leaf);
  t->add_option("--features", ta.features, "coordinates searched per split (0 = ceil(sqrt(q+l)))");
  t->add_option("--null-mode", ta.null_mode, "exhaustive or monte_carlo");
  t->add_option("--null-draws", ta.null_draws);
  t->add_option("--jobs,-j", ta.jobs);
  t->add_option("--subsample", ta.subsample, "keep this many rows at random");
  t->add_option("--stratify", ta.stratify, "column whose value proportions the subsample keeps");
  t->add_option("--output,-o", ta.output, "JSON result (default stdout)");
  t->add_option("--replicates-csv", ta.replicates_csv, "per-replicate CSV");

  ExperimentArgs ea;
  auto* e = app.add_subcommand("experiment", "Run an experiment plan");
  e->add_option("--plan", ea.plan)->required();
  e->add_option("--output-dir", ea.output_dir);
  e->add_option("--jobs,-j", ea.jobs);
  e->add_option("--b", ea.b, "override the number of data draws");

  NullArgs na;
  auto* n = app.add_subcommand("null-table", "Tabulate the null law of the rank statistic");
  n->add_option("--n-minus", na.n_minus);
  n->add_option("--n-plus", na.n_plus);
  n->add_option("--phi", na.phi);
  n->add_option("--mode", na.mode, "exhaustive or monte_carlo");
  n->add_option("--draws", na.draws);
  n->add_option("--seed", na.seed);
  n->add_option("--alpha", na.alphas, "print the quantile at these levels")->delimiter(',');
  n->add_option("--out,-o", na.out);

  RocArgs ra;
  auto* r = app.add_subcommand("roc", "Monte Carlo oracle ROC curves");
  r->add_option("--model", ra.model, "GL, GLplus or GUMBEL");
  r->add_option("--d", ra.d);
  r->add_option("--rho", ra.rhos)->delimiter(',');
  r->add_option("--m", ra.m);
  r->add_option("--seed", ra.seed);
  r->add_option("--csv-prefix", ra.csv_prefix);
  r->add_option("--svg", ra.svg);

  BoundsArgs ba;
  auto* b = app.add_subcommand("bounds", "Evaluate the level constant and type-II bound");
  b->add_option("--n-prime", ba.n_prime);
  b->add_option("--p", ba.p);
  b->add_option("--phi", ba.phi);
  b->add_option("--epsilon", ba.epsilon);
  b->add_option("--delta", ba.delta);
  b->add_option("--alpha", ba.alpha);
  b->add_option("--model", ba.model, "also estimate epsilon for this model (GL, GLplus, GUMBEL)");
  b->add_option("--d", ba.d);
  b->add_option("--rho", ba.rho);
  b->add_option("--m", ba.m);
  b->add_option("--seed", ba.seed);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) return run_generate(gen);
    if (*t) return run_test_cmd(ta);
    if (*e) return run_experiment_cmd(ea);
    if (*n) return run_null_cmd(na);
    if (*r) return run_roc_cmd(ra);
    if (*b) return run_bounds_cmd(ba);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
