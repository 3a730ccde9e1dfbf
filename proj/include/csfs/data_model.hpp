#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "csfs/types.hpp"

namespace csfs {

inline constexpr const char* kBiasFeatureName = "__bias__";

/// Feature matrix (d x n, one column per sample) with its label matrix
/// (n x m, entries in {-1, +1}). Validated on construction and immutable
/// afterwards.
class Dataset {
 public:
  Dataset(Matrix features, LabelMatrix labels, Task task,
          std::vector<std::string> feature_names = {},
          std::vector<std::string> label_names = {}, bool has_bias_row = false);

  const Matrix& features() const noexcept { return features_; }
  const LabelMatrix& labels() const noexcept { return labels_; }
  Task task() const noexcept { return task_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  bool has_bias_row() const noexcept { return has_bias_row_; }

  Index num_features() const noexcept { return features_.rows(); }
  Index num_samples() const noexcept { return features_.cols(); }
  Index num_labels() const noexcept { return labels_.cols(); }

  /// Labels as a real matrix, the form the solver consumes.
  Matrix label_values() const { return labels_.cast<double>(); }

  /// Samples restricted to `indices`, in that order.
  Dataset subset(const std::vector<Index>& indices) const;

  /// Features restricted to `indices` (the bias row, when present, is kept
  /// as the last row).
  Dataset select_features(const std::vector<Index>& indices) const;

 private:
  Matrix features_;
  LabelMatrix labels_;
  Task task_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> label_names_;
  bool has_bias_row_;
};

struct Splits {
  std::vector<Index> train;
  std::vector<Index> validation;
  std::vector<Index> test;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless the three sets are non-empty, pairwise
  /// disjoint and within [0, n).
  void validate(Index n) const;
};

/// Marginal probability of each label being +1.
struct ClassPriors {
  Vector P;
};

struct CsvSchema {
  /// Header names of the label columns. Every other column is a feature
  /// unless `feature_columns` is non-empty.
  std::vector<std::string> label_columns;
  std::vector<std::string> feature_columns;
  Task task = Task::Binary;
};

/// Reads a comma-separated file with a header line. Labels may be given in
/// {-1, +1} or {0, 1}; the latter is remapped to {-1, +1}.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);
Dataset read_csv(std::istream& in, const CsvSchema& schema);

/// Writes features then labels, one sample per row, shortest round-trip decimals.
void save_csv(const std::filesystem::path& path, const Dataset& ds);
void write_csv(std::ostream& out, const Dataset& ds);

/// Carves the test set first (test_fraction of all samples), then the
/// validation set (val_fraction of what remains). Indices are 0-based.
Splits split(const Dataset& ds, double val_fraction, double test_fraction,
             std::uint64_t seed, bool stratified = true);

void write_manifest(const std::filesystem::path& path, const Splits& splits);
void write_manifest(std::ostream& out, const Splits& splits);
Splits read_manifest(const std::filesystem::path& path);
Splits read_manifest(std::istream& in);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Per-class uniform ranges of one informative feature.
struct FeatureBoxes {
  Interval majority;
  Interval minority;
};

enum class PositiveClass { Majority, Minority };

/// Axis-aligned uniform boxes. Feature j < informative.size() uses
/// informative[j]; every remaining feature is drawn from `noise` for both
/// classes.
struct SyntheticSpec {
  std::vector<FeatureBoxes> informative;
  Interval noise{0.0, 1.0};
  PositiveClass positive = PositiveClass::Majority;

  /// One informative axis: majority on [0, 1], minority on
  /// [1 - overlap, 2 - overlap]. Remaining axes are noise on [0, 1].
  static SyntheticSpec overlapping_boxes(double overlap);

  /// `count` informative axes with the majority on [0, 1] and the minority
  /// on [shift, 1 + shift]. The minority is the positive class.
  static SyntheticSpec shifted_minority(Index count, double shift);

  /// Two-feature toy whose dominant weight moves from x2 to x1 as the
  /// majority (positive) class becomes cheaper to misclassify: x1 separates
  /// the classes widely, x2 only narrowly.
  static SyntheticSpec two_feature_toy();
};

Dataset gen_synthetic_binary(Index n_minority, double ratio, Index d,
                             const SyntheticSpec& spec, std::uint64_t seed);

/// Adds a constant row of ones named "__bias__".
Dataset append_bias(const Dataset& ds);

ClassPriors class_priors(const Dataset& ds);
ClassPriors class_priors(const LabelMatrix& labels);

/// Class used to stratify a sample: the index of its first positive label,
/// or m when it has none.
std::vector<Index> stratum_keys(const LabelMatrix& labels);

/// Distinct deterministic seed for a subtask of a seeded run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace csfs
