#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csfs/cost_gen.hpp"
#include "csfs/data_model.hpp"
#include "csfs/solver.hpp"

namespace csfs {

struct SweepOptions {
  int T = 20;
  double beta = 1.0;
  /// Defaults to the variant matching the dataset's task.
  std::optional<CostVariant> variant;
  /// Multi-class only. Defaults to the class with the largest training prior.
  std::optional<Index> ref_class;
  SolverConfig solver;
  /// Start each fit from the previous r's solution. Forces sequential execution.
  bool warm_start = false;
  int workers = 1;
};

struct SweepRecord {
  double r = 0.0;
  CostVector costs;
  FitResult fit;
  std::optional<double> validation_f;
  /// Why this r was excluded from selection; empty when it succeeded.
  std::string failure;

  bool ok() const noexcept { return validation_f.has_value(); }
};

struct RankedFeature {
  Index index = 0;
  double score = 0.0;

  friend bool operator==(const RankedFeature&, const RankedFeature&) = default;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ascending r
  std::size_t best = 0;              // index into records
  double best_r = 0.0;
  Matrix best_W;
  std::vector<RankedFeature> ranking;
  CostVariant variant = CostVariant::Binary;
  Index ref_class = 0;
  double beta = 1.0;
  bool has_bias_row = false;

  double best_f() const { return *records.at(best).validation_f; }
};

/// Binary / multi-label: sign(X^T W) with sign(0) = +1. Multi-class: one-hot
/// argmax over the column scores, ties to the lowest class.
LabelMatrix predict(const Matrix& W, const Matrix& X, Task task);

/// The F-measure a task is selected and scored by: binary F_beta, the
/// multi-label micro-F or the multi-class micro-F around `ref_class`.
double task_f_measure(const LabelMatrix& predictions, const LabelMatrix& labels, Task task,
                      double beta, Index ref_class);

/// Fits one cost-sensitive model per discretized r on the training split,
/// scores each on the validation split, keeps the best (ties to the
/// smallest r) and ranks features by the row norms of its projection.
SweepResult run_sweep(const Dataset& ds, const Splits& splits, const SweepOptions& options);

/// Descending row norm, ties to the lower index. The last row is skipped when
/// `bias_flag` is set.
std::vector<RankedFeature> rank_features(const Matrix& W, bool bias_flag);

std::vector<Index> select_top_k(const std::vector<RankedFeature>& ranking, Index k);

/// "r  iterations  objective  validation_f" lines under a header.
void write_sweep_records(std::ostream& out, const SweepResult& result);
/// "rank  feature_index  feature_name  score" lines under a header.
void write_ranking(std::ostream& out, const std::vector<RankedFeature>& ranking,
                   const std::vector<std::string>& feature_names);
/// Records followed by the ranking, tab-separated.
void write_sweep_report(std::ostream& out, const SweepResult& result,
                        const std::vector<std::string>& feature_names);

}  // namespace csfs
