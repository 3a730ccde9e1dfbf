#include "csfs/evaluation.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include <Eigen/Cholesky>

#include "csfs/error.hpp"
#include "csfs/fmeasure.hpp"
#include "csfs/text_format.hpp"

namespace csfs {

const char* to_string(Method method) noexcept {
  return method == Method::CSFS ? "CSFS" : "EqualCost";
}

MetricSummary MetricSummary::from(std::vector<double> values) {
  MetricSummary s;
  s.values = std::move(values);
  if (s.values.empty()) return s;
  const double n = static_cast<double>(s.values.size());
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  if (s.values.size() > 1) {
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

Matrix train_ridge_classifier(const Matrix& X, const Matrix& Y, double ridge) {
  if (!(ridge > 0.0)) throw ConfigError("ridge must be positive");
  if (Y.rows() != X.cols()) throw ShapeError("ridge classifier: Y needs one row per sample");
  Matrix A = Matrix::Zero(X.rows(), X.rows());
  A.selfadjointView<Eigen::Lower>().rankUpdate(X);
  A.diagonal().array() += ridge;
  Eigen::LLT<Matrix, Eigen::Lower> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("ridge system is not positive definite");
  return llt.solve(X * Y);
}

double accuracy(const LabelMatrix& predictions, const LabelMatrix& labels, Task task) {
  if (predictions.rows() != labels.rows() || predictions.cols() != labels.cols())
    throw ShapeError("accuracy: prediction and label shapes differ");
  if (labels.size() == 0) throw ConfigError("accuracy of an empty set");
  if (task == Task::MultiClass) {
    Index correct = 0;
    for (Index i = 0; i < labels.rows(); ++i) correct += predictions.row(i) == labels.row(i);
    return static_cast<double>(correct) / static_cast<double>(labels.rows());
  }
  return static_cast<double>((predictions.array() == labels.array()).count()) /
         static_cast<double>(labels.size());
}

namespace {

void check_trainable(const LabelMatrix& labels, Task task) {
  if (task == Task::MultiLabel) return;
  const auto priors = class_priors(labels);
  if (task == Task::Binary) {
    if (priors.P(0) == 0.0 || priors.P(0) == 1.0)
      throw DataError("degenerate split: training data holds a single class");
  } else if ((priors.P.array() > 0.0).count() < 2) {
    throw DataError("degenerate split: training data holds a single class");
  }
}

}  // namespace

EvalReport downstream_eval(const Dataset& ds, const Splits& splits,
                           const std::vector<Index>& selected, const EvalOptions& options) {
  if (selected.empty()) throw ConfigError("downstream evaluation needs at least one selected feature");
  if (options.repeats < 1) throw ConfigError("repeats must be at least 1");
  splits.validate(ds.num_samples());

  Dataset restricted = ds.select_features(selected);
  if (!restricted.has_bias_row()) restricted = append_bias(restricted);

  const double n = static_cast<double>(ds.num_samples());
  const double test_fraction = static_cast<double>(splits.test.size()) / n;
  const double val_fraction =
      static_cast<double>(splits.validation.size()) / (n - static_cast<double>(splits.test.size()));

  EvalReport report;
  report.k = static_cast<Index>(selected.size());
  report.selected = selected;
  report.ridge = options.ridge;
  std::vector<double> acc, f;
  for (int j = 0; j < options.repeats; ++j) {
    const Splits s = j == 0 ? splits
                            : split(ds, val_fraction, test_fraction,
                                    options.seed + static_cast<std::uint64_t>(j), options.stratified);
    std::vector<Index> fit_idx = s.train;
    fit_idx.insert(fit_idx.end(), s.validation.begin(), s.validation.end());

    const Dataset fit_set = restricted.subset(fit_idx);
    const Dataset test_set = restricted.subset(s.test);
    check_trainable(fit_set.labels(), ds.task());
    const Matrix W = train_ridge_classifier(fit_set.features(), fit_set.label_values(), options.ridge);
    const LabelMatrix pred = predict(W, test_set.features(), ds.task());
    const Index ref = options.ref_class.value_or(
        ds.task() == Task::MultiClass ? default_ref_class(class_priors(fit_set)) : 0);

    acc.push_back(accuracy(pred, test_set.labels(), ds.task()));
    f.push_back(task_f_measure(pred, test_set.labels(), ds.task(), options.beta, ref));
    report.seeds.push_back(s.seed);
    report.train_indices.push_back(std::move(fit_idx));
    report.test_indices.push_back(s.test);
  }
  report.accuracy = MetricSummary::from(std::move(acc));
  report.f_measure = MetricSummary::from(std::move(f));
  return report;
}

std::vector<RankedFeature> equal_cost_ranking(const Dataset& ds, const Splits& splits,
                                              const SolverConfig& config) {
  splits.validate(ds.num_samples());
  const Dataset train = ds.subset(splits.train);
  const CostMatrix C = CostMatrix::Ones(train.num_samples(), train.num_labels());
  const FitResult result = fit(train.features(), train.label_values(), C, config);
  return rank_features(result.W, ds.has_bias_row());
}

EvalReport baseline_equal_cost(const Dataset& ds, const Splits& splits, Index k,
                               const SolverConfig& config, const EvalOptions& options) {
  const auto ranking = equal_cost_ranking(ds, splits, config);
  EvalReport report = downstream_eval(ds, splits, select_top_k(ranking, k), options);
  report.method = Method::EqualCost;
  return report;
}

Comparison compare_report(const EvalReport& a, const EvalReport& b) {
  if (a.k != b.k) throw ConfigError("cannot compare reports with different k");
  if (a.seeds != b.seeds) throw ConfigError("cannot compare reports with different seeds");
  if (a.f_measure.values.size() != b.f_measure.values.size() ||
      a.accuracy.values.size() != b.accuracy.values.size())
    throw ConfigError("cannot compare reports with different repeat counts");
  if (a.test_indices != b.test_indices)
    throw ConfigError("cannot compare reports evaluated on different test splits");

  Comparison c;
  c.k = a.k;
  c.seeds = a.seeds;
  for (std::size_t j = 0; j < a.f_measure.values.size(); ++j) {
    const double df = a.f_measure.values[j] - b.f_measure.values[j];
    c.f_diff.push_back(df);
    c.accuracy_diff.push_back(a.accuracy.values[j] - b.accuracy.values[j]);
    if (df > 0) ++c.f_wins;
    else if (df < 0) ++c.f_losses;
    else ++c.f_ties;
  }
  c.mean_f_gap = MetricSummary::from(c.f_diff).mean;
  c.mean_accuracy_gap = MetricSummary::from(c.accuracy_diff).mean;
  return c;
}

void write_eval_reports(std::ostream& out, const std::vector<EvalReport>& reports) {
  for (const auto& r : reports) {
    out << "# " << to_string(r.method) << " k=" << r.k << " ridge=" << format_real(r.ridge)
        << " seeds=";
    for (std::size_t j = 0; j < r.seeds.size(); ++j) out << (j ? "," : "") << r.seeds[j];
    out << '\n';
  }
  out << "method\tk\tsplit\tmetric\tmean\tstd\n";
  for (const auto& r : reports) {
    out << to_string(r.method) << '\t' << r.k << "\ttest\taccuracy\t" << format_real(r.accuracy.mean)
        << '\t' << format_real(r.accuracy.std) << '\n';
    out << to_string(r.method) << '\t' << r.k << "\ttest\tf_measure\t"
        << format_real(r.f_measure.mean) << '\t' << format_real(r.f_measure.std) << '\n';
  }
}

void write_curve(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "method\tk\tf_mean\tf_std\taccuracy_mean\taccuracy_std\n";
  for (const auto& r : reports) {
    out << to_string(r.method) << '\t' << r.k << '\t' << format_real(r.f_measure.mean) << '\t'
        << format_real(r.f_measure.std) << '\t' << format_real(r.accuracy.mean) << '\t'
        << format_real(r.accuracy.std) << '\n';
  }
}

void write_comparisons(std::ostream& out, const std::vector<Comparison>& comparisons) {
  out << "k\tseed\tf_diff\taccuracy_diff\n";
  for (const auto& c : comparisons) {
    for (std::size_t j = 0; j < c.f_diff.size(); ++j)
      out << c.k << '\t' << c.seeds[j] << '\t' << format_real(c.f_diff[j]) << '\t'
          << format_real(c.accuracy_diff[j]) << '\n';
  }
  out << "k\tmean_f_gap\tmean_accuracy_gap\tf_wins\tf_losses\tf_ties\n";
  for (const auto& c : comparisons)
    out << c.k << '\t' << format_real(c.mean_f_gap) << '\t' << format_real(c.mean_accuracy_gap)
        << '\t' << c.f_wins << '\t' << c.f_losses << '\t' << c.f_ties << '\n';
}

}  // namespace csfs
