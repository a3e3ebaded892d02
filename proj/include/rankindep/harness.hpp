#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankindep/baselines.hpp"
#include "rankindep/core.hpp"
#include "rankindep/datagen.hpp"
#include "rankindep/testproc.hpp"

namespace rankindep {

/// One competitor: the ranking test (learned or oracle scorer) or a baseline.
struct MethodSpec {
  enum class Family { rforest, rtree, oracle, baseline };
  Family family = Family::rforest;
  TestConfig test;         ///< ranking families
  BaselineConfig baseline; ///< baseline family
  std::string label;       ///< e.g. rforest-mww, hsic

  /// Parses {"id": "rforest"|"rtree"|"oracle"|"hsic"|"dcor-l1"|"dcor-l2",
  /// "phi": "mww", "kp": 10, "k0": 200, "forest": {...}, "learn_fraction": 0.8, ...}.
  static MethodSpec from_json(const nlohmann::json& j);
  /// Shorthand ids such as "rforest-mww", "rforest-rtb:0.9", "hsic".
  static MethodSpec parse(const std::string& id);
  nlohmann::json to_json() const;
};

/// A data-generating cell: model, pooled size N.
struct DataCell {
  ModelSpec model;
  std::size_t n_total = 500;
  std::string label() const;
};

struct ExperimentPlan {
  std::string name = "experiment";
  std::vector<DataCell> cells;
  std::vector<MethodSpec> methods;
  std::size_t b = 100;
  std::vector<double> alphas{0.01, 0.05, 0.1};
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::size_t jobs = 1;

  void validate() const;
  /// "models": [{"model": "GL", "d": 4, "rho": [0, 0.3], "n": 500}, ...]; rho
  /// and n may be scalars or arrays and expand to one cell per combination.
  static ExperimentPlan from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class Accounting { per_draw, per_replicate };
const char* to_string(Accounting a) noexcept;

struct ResultRow {
  std::string model;
  std::size_t d = 0;
  std::size_t n_total = 0;
  double rho = 0.0;
  std::string method;
  Accounting accounting = Accounting::per_draw;
  double alpha = 0.05;
  double rejection_rate = 0.0;
  double ci_half_width = 0.0;  ///< 1.96 sqrt(r(1-r)/B_eff)
  double std_dev = 0.0;        ///< sqrt(r(1-r)), the Bernoulli standard deviation
  std::size_t b_effective = 0;
  double runtime_seconds = 0.0;  ///< not written to results.csv (see timings.csv)
  std::uint64_t seed = 0;
};

/// p-values collected for one (cell, method): one per data draw, plus the
/// per-replicate p-values of the ranking test.
struct CellPValues {
  std::vector<double> per_draw;
  std::vector<double> per_replicate;
};

/// Fraction of p-values <= alpha.
double rejection_rate(const std::vector<double>& p_values, double alpha);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  nlohmann::json manifest;
};

/// Runs the plan; for each cell and draw one dataset is shared by all methods.
/// Writes results.csv, timings.csv, manifest.json and power_<cell>.svg into
/// plan.output_dir (skipped when write_files is false). Cells that fail are
/// recorded in the manifest and skipped.
ExperimentResult run_experiment(const ExperimentPlan& plan, bool write_files = true);

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);

// ---------------------------------------------------------------------------
// CSV data ingestion.
// ---------------------------------------------------------------------------

struct IngestOptions {
  std::optional<std::size_t> subsample;   ///< keep this many rows at random
  std::optional<std::string> stratify_by; ///< preserve the proportions of this column's values
  std::uint64_t seed = 0;
};

struct IngestResult {
  PairedDataset data;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;  ///< missing or non-numeric selected values
};

IngestResult ingest_csv(const std::string& path, const std::vector<std::string>& x_columns,
                        const std::vector<std::string>& y_columns, const IngestOptions& options = {});

/// Header x1..xq,y1..yl followed by one row per observation.
void write_dataset_csv(const PairedDataset& data, std::ostream& out);

}  // namespace rankindep
