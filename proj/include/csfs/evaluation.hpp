#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "csfs/data_model.hpp"
#include "csfs/solver.hpp"
#include "csfs/sweep.hpp"

namespace csfs {

enum class Method { CSFS, EqualCost };

const char* to_string(Method method) noexcept;

struct MetricSummary {
  std::vector<double> values;  // one per repeat
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single repeat

  static MetricSummary from(std::vector<double> values);
};

struct EvalOptions {
  int repeats = 10;
  /// Repeat j > 0 re-splits the data with seed + j; repeat 0 uses the given splits.
  std::uint64_t seed = 0;
  double ridge = 1e-3;
  double beta = 1.0;
  /// Multi-class only; defaults to the largest training prior.
  std::optional<Index> ref_class;
  bool stratified = true;
};

struct EvalReport {
  Method method = Method::CSFS;
  Index k = 0;
  std::vector<Index> selected;
  std::vector<std::uint64_t> seeds;  // split seed of each repeat
  double ridge = 0.0;
  MetricSummary accuracy;
  MetricSummary f_measure;
  /// Index audit: the samples each repeat trained on and scored on.
  std::vector<std::vector<Index>> train_indices;
  std::vector<std::vector<Index>> test_indices;
};

struct Comparison {
  Index k = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> f_diff;         // a - b per repeat
  std::vector<double> accuracy_diff;  // a - b per repeat
  double mean_f_gap = 0.0;
  double mean_accuracy_gap = 0.0;
  int f_wins = 0;
  int f_losses = 0;
  int f_ties = 0;
};

/// Least-squares linear classifier with a fixed ridge: W = (X X^T + ridge I)^-1 X Y.
Matrix train_ridge_classifier(const Matrix& X, const Matrix& Y, double ridge);

/// Fraction of correctly predicted samples (multi-class) or label entries.
double accuracy(const LabelMatrix& predictions, const LabelMatrix& labels, Task task);

/// Restricts to `selected` plus a bias row, trains the ridge classifier on
/// train + validation and scores accuracy and the task's F-measure on the
/// test split, over `options.repeats` seeded splits.
EvalReport downstream_eval(const Dataset& ds, const Splits& splits,
                           const std::vector<Index>& selected, const EvalOptions& options);

/// Ranking of the cost-blind problem: constant cost 1 on every entry.
std::vector<RankedFeature> equal_cost_ranking(const Dataset& ds, const Splits& splits,
                                              const SolverConfig& config);

/// Equal-cost fit, top-k selection and the same downstream evaluation as CSFS.
EvalReport baseline_equal_cost(const Dataset& ds, const Splits& splits, Index k,
                               const SolverConfig& config, const EvalOptions& options);

/// Paired per-repeat differences a - b. Both reports must share k and seeds.
Comparison compare_report(const EvalReport& a, const EvalReport& b);

/// "method k split metric mean std" rows, preceded by a comment line that
/// records the ridge constant and seeds.
void write_eval_reports(std::ostream& out, const std::vector<EvalReport>& reports);
/// "method k f_mean f_std accuracy_mean accuracy_std" rows for plotting.
void write_curve(std::ostream& out, const std::vector<EvalReport>& reports);
void write_comparisons(std::ostream& out, const std::vector<Comparison>& comparisons);

}  // namespace csfs
