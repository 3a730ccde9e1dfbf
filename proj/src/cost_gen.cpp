#include "csfs/cost_gen.hpp"

#include <cmath>
#include <string>

#include "csfs/error.hpp"

namespace csfs {

const char* to_string(CostVariant variant) noexcept {
  switch (variant) {
    case CostVariant::Binary: return "binary";
    case CostVariant::MultiLabelMicro: return "multilabel-micro";
    case CostVariant::MultiClassMicro: return "multiclass-micro";
  }
  return "unknown";
}

CostVariant variant_for(Task task) noexcept {
  switch (task) {
    case Task::Binary: return CostVariant::Binary;
    case Task::MultiLabel: return CostVariant::MultiLabelMicro;
    case Task::MultiClass: return CostVariant::MultiClassMicro;
  }
  return CostVariant::Binary;
}

namespace {

double check_r(double r, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  const double top = 1.0 + beta * beta;
  if (!(r >= 0.0 && r <= top))
    throw ConfigError("r = " + std::to_string(r) + " outside [0, 1 + beta^2] would give a negative cost");
  return top;
}

}  // namespace

std::vector<double> discretize(int T, double beta) {
  if (T < 1) throw ConfigError("T must be at least 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  const double top = 1.0 + beta * beta;
  std::vector<double> r(static_cast<std::size_t>(T));
  for (int i = 1; i <= T; ++i) r[static_cast<std::size_t>(i - 1)] = i * top / (T + 1);
  return r;
}

CostVector cost_fn_binary(double r, double beta) {
  const double top = check_r(r, beta);
  CostVector out;
  out.a.resize(2);
  out.a << top - r, r;
  out.r = r;
  out.beta = beta;
  out.variant = CostVariant::Binary;
  return out;
}

CostVector cost_fn_multilabel(double r, double beta, Index m) {
  const double top = check_r(r, beta);
  if (m < 1) throw ConfigError("multi-label costs need m >= 1");
  CostVector out;
  out.a.resize(2 * m);
  for (Index k = 0; k < m; ++k) {
    out.a(2 * k) = top - r;
    out.a(2 * k + 1) = r;
  }
  out.r = r;
  out.beta = beta;
  out.variant = CostVariant::MultiLabelMicro;
  return out;
}

CostVector cost_fn_multiclass(double r, double beta, Index m, Index ref_class) {
  const double top = check_r(r, beta);
  if (m < 2) throw ConfigError("multi-class costs need m >= 2");
  if (ref_class < 0 || ref_class >= m)
    throw ConfigError("reference class " + std::to_string(ref_class) + " out of range");
  CostVector out;
  out.a = Vector::Zero(2 * m);
  for (Index k = 0; k < m; ++k) out.a(2 * k) = k == ref_class ? r : top - r;
  out.r = r;
  out.beta = beta;
  out.variant = CostVariant::MultiClassMicro;
  out.ref_class = ref_class;
  return out;
}

CostVector make_cost_vector(CostVariant variant, double r, double beta, Index m, Index ref_class) {
  switch (variant) {
    case CostVariant::Binary:
      if (m != 1) throw ConfigError("binary costs need exactly one label column");
      return cost_fn_binary(r, beta);
    case CostVariant::MultiLabelMicro: return cost_fn_multilabel(r, beta, m);
    case CostVariant::MultiClassMicro: return cost_fn_multiclass(r, beta, m, ref_class);
  }
  throw ConfigError("unknown cost variant");
}

CostMatrix build_cost_matrix(const LabelMatrix& labels, const CostVector& a) {
  if (a.a.size() != 2 * labels.cols())
    throw ShapeError("cost vector of length " + std::to_string(a.a.size()) + " does not match " +
                     std::to_string(labels.cols()) + " label columns");
  CostMatrix C(labels.rows(), labels.cols());
  for (Index k = 0; k < labels.cols(); ++k) {
    const double fn_cost = a.a(2 * k);
    const double fp_cost = a.a(2 * k + 1);
    for (Index i = 0; i < labels.rows(); ++i) C(i, k) = labels(i, k) == 1 ? fn_cost : fp_cost;
  }
  return C;
}

}  // namespace csfs
