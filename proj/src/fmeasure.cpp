#include "csfs/fmeasure.hpp"

#include <string>

#include "csfs/cost_gen.hpp"
#include "csfs/error.hpp"

namespace csfs {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
}

double checked_ratio(double num, double den, const char* measure) {
  if (!(den > 0.0))
    throw UndefinedMeasureError(std::string(measure) + " is undefined: denominator " +
                                std::to_string(den) + " is not positive");
  return num / den;
}

}  // namespace

ConfusionCounts confusion(const LabelMatrix& predictions, const LabelMatrix& labels) {
  if (predictions.rows() != labels.rows() || predictions.cols() != labels.cols())
    throw ShapeError("prediction matrix is " + std::to_string(predictions.rows()) + "x" +
                     std::to_string(predictions.cols()) + " but labels are " +
                     std::to_string(labels.rows()) + "x" + std::to_string(labels.cols()));
  ConfusionCounts counts;
  counts.n = labels.rows();
  counts.per_class.resize(static_cast<std::size_t>(labels.cols()));
  for (Index k = 0; k < labels.cols(); ++k) {
    auto& c = counts.per_class[static_cast<std::size_t>(k)];
    for (Index i = 0; i < labels.rows(); ++i) {
      const int p = predictions(i, k);
      const int y = labels(i, k);
      if ((p != 1 && p != -1) || (y != 1 && y != -1))
        throw LabelDomainError("confusion counts need entries in {-1, +1}");
      if (y == 1) {
        (p == 1 ? c.tp : c.fn) += 1;
      } else {
        (p == 1 ? c.fp : c.tn) += 1;
      }
    }
  }
  return counts;
}

ErrorProfile error_profile(const ConfusionCounts& counts) {
  if (counts.n <= 0) throw ConfigError("error profile needs at least one sample");
  const Index m = counts.num_classes();
  const double n = static_cast<double>(counts.n);
  ErrorProfile out;
  out.e.resize(2 * m);
  out.priors.P.resize(m);
  for (Index k = 0; k < m; ++k) {
    const auto& c = counts.per_class[static_cast<std::size_t>(k)];
    if (c.tp + c.fp + c.fn + c.tn != counts.n)
      throw DataError("confusion counts of class " + std::to_string(k) + " do not sum to n");
    out.e(2 * k) = static_cast<double>(c.fn) / n;
    out.e(2 * k + 1) = static_cast<double>(c.fp) / n;
    out.priors.P(k) = static_cast<double>(c.tp + c.fn) / n;
  }
  return out;
}

double f_beta_binary(const ErrorProfile& e, double beta) {
  check_beta(beta);
  if (e.num_classes() != 1 || e.e.size() != 2)
    throw ShapeError("binary F-measure needs a single-class error profile");
  const double b2 = 1.0 + beta * beta;
  const double P = e.priors.P(0);
  return checked_ratio(b2 * (P - e.e(0)), b2 * P - e.e(0) + e.e(1), "binary F-measure");
}

double ml_micro_f(const ErrorProfile& e, double beta) {
  check_beta(beta);
  const Index m = e.num_classes();
  if (e.e.size() != 2 * m) throw ShapeError("error profile length must be 2m");
  const double b2 = 1.0 + beta * beta;
  double num = 0.0;
  double den = 0.0;
  for (Index k = 0; k < m; ++k) {
    num += b2 * (e.priors.P(k) - e.fn(k));
    den += b2 * e.priors.P(k) - e.fn(k) + e.fp(k);
  }
  return checked_ratio(num, den, "multi-label micro-F-measure");
}

double mc_micro_f(const ErrorProfile& e, double beta, Index ref_class) {
  check_beta(beta);
  const Index m = e.num_classes();
  if (m < 2) throw ShapeError("multi-class micro-F-measure needs at least two classes");
  if (e.e.size() != 2 * m) throw ShapeError("error profile length must be 2m");
  if (ref_class < 0 || ref_class >= m)
    throw ConfigError("reference class " + std::to_string(ref_class) + " out of range");
  const double b2 = 1.0 + beta * beta;
  double other_fn = 0.0;
  for (Index k = 0; k < m; ++k)
    if (k != ref_class) other_fn += e.fn(k);
  const double rest = 1.0 - e.priors.P(ref_class);
  return checked_ratio(b2 * (rest - other_fn), b2 * rest - other_fn + e.fn(ref_class),
                       "multi-class micro-F-measure");
}

double macro_f(const ConfusionCounts& counts, double beta) {
  const auto profile = error_profile(counts);
  const Index m = profile.num_classes();
  if (m == 0) throw ConfigError("macro-F needs at least one class");
  double sum = 0.0;
  for (Index k = 0; k < m; ++k) {
    ErrorProfile single;
    single.e = profile.e.segment(2 * k, 2);
    single.priors.P = profile.priors.P.segment(k, 1);
    sum += f_beta_binary(single, beta);
  }
  return sum / static_cast<double>(m);
}

double total_cost(const CostVector& a, const ErrorProfile& e) {
  if (a.a.size() != e.e.size())
    throw ShapeError("cost vector has length " + std::to_string(a.a.size()) +
                     " but error profile has length " + std::to_string(e.e.size()));
  if ((a.a.array() < 0.0).any()) throw ConfigError("cost vector has negative entries");
  return a.a.dot(e.e);
}

Index default_ref_class(const ClassPriors& priors) {
  if (priors.P.size() == 0) throw ConfigError("no classes");
  Index best = 0;
  for (Index k = 1; k < priors.P.size(); ++k)
    if (priors.P(k) > priors.P(best)) best = k;
  return best;
}

}  // namespace csfs
