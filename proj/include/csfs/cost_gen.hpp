#pragma once

#include <vector>

#include "csfs/types.hpp"

namespace csfs {

enum class CostVariant { Binary, MultiLabelMicro, MultiClassMicro };

const char* to_string(CostVariant variant) noexcept;

/// The variant whose F-measure matches a task.
CostVariant variant_for(Task task) noexcept;

/// Misclassification costs generated from a discretized F-measure value r.
/// Same layout as ErrorProfile: a(2k) is the FN cost of class k, a(2k + 1)
/// its FP cost.
struct CostVector {
  Vector a;
  double r = 0.0;
  double beta = 1.0;
  CostVariant variant = CostVariant::Binary;
  Index ref_class = 0;

  Index num_classes() const noexcept { return a.size() / 2; }
};

/// Per-sample costs, n x m.
using CostMatrix = Matrix;

/// T evenly spaced values strictly inside (0, 1 + beta^2):
/// r_i = i (1 + beta^2) / (T + 1), i = 1..T.
std::vector<double> discretize(int T, double beta);

CostVector cost_fn_binary(double r, double beta);
CostVector cost_fn_multilabel(double r, double beta, Index m);
CostVector cost_fn_multiclass(double r, double beta, Index m, Index ref_class);

/// Dispatches on `variant`. `m` and `ref_class` are ignored where they do not apply.
CostVector make_cost_vector(CostVariant variant, double r, double beta, Index m, Index ref_class);

/// c_ik = FN cost of class k when y_ik = +1, its FP cost otherwise.
CostMatrix build_cost_matrix(const LabelMatrix& labels, const CostVector& a);

}  // namespace csfs
