#pragma once

#include <vector>

#include "csfs/data_model.hpp"
#include "csfs/types.hpp"

namespace csfs {

struct CostVector;

struct ClassCounts {
  Index tp = 0;
  Index fp = 0;
  Index fn = 0;
  Index tn = 0;
};

struct ConfusionCounts {
  std::vector<ClassCounts> per_class;
  Index n = 0;

  Index num_classes() const noexcept { return static_cast<Index>(per_class.size()); }
};

/// Error profile e = (FN_1, FP_1, ..., FN_m, FP_m) with the class priors it
/// was measured against. Stored 0-based: e(2k) is FN of class k, e(2k + 1)
/// its FP.
struct ErrorProfile {
  Vector e;
  ClassPriors priors;

  Index num_classes() const noexcept { return priors.P.size(); }
  double fn(Index k) const { return e(2 * k); }
  double fp(Index k) const { return e(2 * k + 1); }
};

ConfusionCounts confusion(const LabelMatrix& predictions, const LabelMatrix& labels);

ErrorProfile error_profile(const ConfusionCounts& counts);

/// Binary F_beta as a function of the error profile. Requires m = 1.
double f_beta_binary(const ErrorProfile& e, double beta);

/// Multi-label micro-F_beta (pooled over classes).
double ml_micro_f(const ErrorProfile& e, double beta);

/// Multi-class micro-F_beta. `ref_class` plays the role of the privileged
/// first class; the measure is computed over the remaining classes.
double mc_micro_f(const ErrorProfile& e, double beta, Index ref_class);

/// Unweighted mean of the per-class binary F_beta values.
double macro_f(const ConfusionCounts& counts, double beta);

/// <a, e>
double total_cost(const CostVector& a, const ErrorProfile& e);

/// Class with the largest prior, ties to the lowest index.
Index default_ref_class(const ClassPriors& priors);

}  // namespace csfs
