#include "csfs/sweep.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "csfs/error.hpp"
#include "csfs/fmeasure.hpp"
#include "csfs/parallel.hpp"
#include "csfs/text_format.hpp"

namespace csfs {

LabelMatrix predict(const Matrix& W, const Matrix& X, Task task) {
  if (W.rows() != X.rows())
    throw ShapeError("W has " + std::to_string(W.rows()) + " rows but X has " +
                     std::to_string(X.rows()) + " features");
  const Matrix scores = X.transpose() * W;
  LabelMatrix out(scores.rows(), scores.cols());
  if (task == Task::MultiClass) {
    out.setConstant(-1);
    for (Index i = 0; i < scores.rows(); ++i) {
      Index best = 0;
      for (Index k = 1; k < scores.cols(); ++k)
        if (scores(i, k) > scores(i, best)) best = k;
      out(i, best) = 1;
    }
  } else {
    out = (scores.array() >= 0.0).select(LabelMatrix::Ones(scores.rows(), scores.cols()),
                                         LabelMatrix::Constant(scores.rows(), scores.cols(), -1));
  }
  return out;
}

double task_f_measure(const LabelMatrix& predictions, const LabelMatrix& labels, Task task,
                      double beta, Index ref_class) {
  const auto profile = error_profile(confusion(predictions, labels));
  switch (task) {
    case Task::Binary: return f_beta_binary(profile, beta);
    case Task::MultiLabel: return ml_micro_f(profile, beta);
    case Task::MultiClass: return mc_micro_f(profile, beta, ref_class);
  }
  throw ConfigError("unknown task");
}

SweepResult run_sweep(const Dataset& ds, const Splits& splits, const SweepOptions& options) {
  splits.validate(ds.num_samples());
  options.solver.validate();
  const auto rs = discretize(options.T, options.beta);

  const Dataset train = ds.subset(splits.train);
  const Dataset validation = ds.subset(splits.validation);
  const Matrix Y = train.label_values();

  SweepResult result;
  result.variant = options.variant.value_or(variant_for(ds.task()));
  result.beta = options.beta;
  result.has_bias_row = ds.has_bias_row();
  result.ref_class = options.ref_class.value_or(
      ds.task() == Task::MultiClass ? default_ref_class(class_priors(train)) : 0);
  result.records.resize(rs.size());

  auto run_one = [&](std::size_t i, const std::optional<Matrix>& start) {
    auto& rec = result.records[i];
    rec.r = rs[i];
    try {
      rec.costs = make_cost_vector(result.variant, rec.r, options.beta, ds.num_labels(),
                                   result.ref_class);
      const CostMatrix C = build_cost_matrix(train.labels(), rec.costs);
      rec.fit = fit(train.features(), Y, C, options.solver, start);
      const LabelMatrix pred = predict(rec.fit.W, validation.features(), ds.task());
      rec.validation_f = task_f_measure(pred, validation.labels(), ds.task(), options.beta,
                                        result.ref_class);
    } catch (const UndefinedMeasureError& e) {
      rec.failure = e.what();
    } catch (const NumericalError& e) {
      rec.failure = e.what();
    }
  };

  if (options.warm_start) {
    std::optional<Matrix> start;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      run_one(i, start);
      if (result.records[i].fit.W.size() > 0) start = result.records[i].fit.W;
    }
  } else {
    parallel_for(rs.size(), options.workers, [&](std::size_t i) { run_one(i, std::nullopt); });
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& rec = result.records[i];
    if (!rec.ok()) continue;
    if (!best || *rec.validation_f > *result.records[*best].validation_f) best = i;
  }
  if (!best) {
    std::string why = "every r value failed";
    if (!result.records.empty()) why += " (first: " + result.records.front().failure + ")";
    throw NumericalError(why);
  }
  result.best = *best;
  result.best_r = result.records[*best].r;
  result.best_W = result.records[*best].fit.W;
  result.ranking = rank_features(result.best_W, ds.has_bias_row());
  return result;
}

std::vector<RankedFeature> rank_features(const Matrix& W, bool bias_flag) {
  const Index rows = bias_flag ? W.rows() - 1 : W.rows();
  const Vector norms = row_norms(W);
  std::vector<RankedFeature> ranking;
  ranking.reserve(static_cast<std::size_t>(std::max<Index>(rows, 0)));
  for (Index j = 0; j < rows; ++j) ranking.push_back({j, norms(j)});
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const RankedFeature& a, const RankedFeature& b) { return a.score > b.score; });
  return ranking;
}

std::vector<Index> select_top_k(const std::vector<RankedFeature>& ranking, Index k) {
  if (k < 1 || k > static_cast<Index>(ranking.size()))
    throw ConfigError("k = " + std::to_string(k) + " must lie in [1, " +
                      std::to_string(ranking.size()) + "]");
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) out.push_back(ranking[static_cast<std::size_t>(i)].index);
  return out;
}

void write_sweep_records(std::ostream& out, const SweepResult& result) {
  out << "r\titerations\tobjective\tvalidation_f\n";
  for (const auto& rec : result.records) {
    const bool fitted = !rec.fit.objective_trace.empty();
    out << format_real(rec.r) << '\t' << rec.fit.iterations_used << '\t'
        << (fitted ? format_real(rec.fit.objective_trace.back()) : std::string("NA")) << '\t'
        << (rec.validation_f ? format_real(*rec.validation_f) : std::string("NA")) << '\n';
  }
}

void write_ranking(std::ostream& out, const std::vector<RankedFeature>& ranking,
                   const std::vector<std::string>& feature_names) {
  out << "rank\tfeature_index\tfeature_name\tscore\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto j = static_cast<std::size_t>(ranking[i].index);
    out << i + 1 << '\t' << ranking[i].index << '\t'
        << (j < feature_names.size() ? feature_names[j] : std::string("?")) << '\t'
        << format_real(ranking[i].score) << '\n';
  }
}

void write_sweep_report(std::ostream& out, const SweepResult& result,
                        const std::vector<std::string>& feature_names) {
  write_sweep_records(out, result);
  write_ranking(out, result.ranking, feature_names);
}

}  // namespace csfs
