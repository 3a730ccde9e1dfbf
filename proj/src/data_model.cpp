#include "csfs/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "csfs/error.hpp"
#include "csfs/text_format.hpp"

namespace csfs {

const char* to_string(Task task) noexcept {
  switch (task) {
    case Task::Binary: return "binary";
    case Task::MultiClass: return "multiclass";
    case Task::MultiLabel: return "multilabel";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  if (name == "binary") return Task::Binary;
  if (name == "multiclass") return Task::MultiClass;
  if (name == "multilabel") return Task::MultiLabel;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected binary, multiclass or multilabel)");
}

namespace {

std::vector<std::string> default_feature_names(Index d, bool bias) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(d));
  const Index plain = bias ? d - 1 : d;
  for (Index j = 0; j < plain; ++j) names.push_back("x" + std::to_string(j + 1));
  if (bias) names.emplace_back(kBiasFeatureName);
  return names;
}

std::vector<std::string> default_label_names(Index m) {
  if (m == 1) return {"y"};
  std::vector<std::string> names;
  for (Index k = 0; k < m; ++k) names.push_back("y" + std::to_string(k + 1));
  return names;
}

void check_dataset(const Matrix& X, const LabelMatrix& Y, Task task, bool has_bias_row,
                   Index min_samples) {
  if (X.rows() < 1) throw DataError("dataset needs at least one feature");
  if (X.cols() < min_samples)
    throw DataError("dataset needs at least " + std::to_string(min_samples) + " samples, got " +
                    std::to_string(X.cols()));
  if (Y.cols() < 1) throw DataError("dataset needs at least one label column");
  if (Y.rows() != X.cols())
    throw ShapeError("label matrix has " + std::to_string(Y.rows()) + " rows but there are " +
                     std::to_string(X.cols()) + " samples");
  if (!X.allFinite()) throw DataError("feature matrix contains non-finite values");
  for (Index i = 0; i < Y.rows(); ++i) {
    for (Index k = 0; k < Y.cols(); ++k) {
      const int v = Y(i, k);
      if (v != 1 && v != -1)
        throw LabelDomainError("label (" + std::to_string(i) + ", " + std::to_string(k) +
                               ") = " + std::to_string(v) + " is not in {-1, +1}");
    }
  }
  switch (task) {
    case Task::Binary:
      if (Y.cols() != 1) throw DataError("binary task requires exactly one label column");
      break;
    case Task::MultiClass:
      if (Y.cols() < 2) throw DataError("multi-class task requires at least two label columns");
      for (Index i = 0; i < Y.rows(); ++i) {
        if ((Y.row(i).array() == 1).count() != 1)
          throw DataError("multi-class sample " + std::to_string(i) +
                          " must have exactly one positive label");
      }
      break;
    case Task::MultiLabel:
      break;
  }
  if (has_bias_row && !(X.row(X.rows() - 1).array() == 1.0).all())
    throw DataError("bias row must be all ones");
}

}  // namespace

Dataset::Dataset(Matrix features, LabelMatrix labels, Task task,
                 std::vector<std::string> feature_names, std::vector<std::string> label_names,
                 bool has_bias_row)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      task_(task),
      feature_names_(std::move(feature_names)),
      label_names_(std::move(label_names)),
      has_bias_row_(has_bias_row) {
  // Subsets may legitimately hold a single sample (small test splits).
  check_dataset(features_, labels_, task_, has_bias_row_, 1);
  if (feature_names_.empty()) feature_names_ = default_feature_names(num_features(), has_bias_row_);
  if (label_names_.empty()) label_names_ = default_label_names(num_labels());
  if (static_cast<Index>(feature_names_.size()) != num_features())
    throw ShapeError("expected " + std::to_string(num_features()) + " feature names, got " +
                     std::to_string(feature_names_.size()));
  if (static_cast<Index>(label_names_.size()) != num_labels())
    throw ShapeError("expected " + std::to_string(num_labels()) + " label names, got " +
                     std::to_string(label_names_.size()));
}

Dataset Dataset::subset(const std::vector<Index>& indices) const {
  Matrix X(num_features(), static_cast<Index>(indices.size()));
  LabelMatrix Y(static_cast<Index>(indices.size()), num_labels());
  for (std::size_t s = 0; s < indices.size(); ++s) {
    const Index i = indices[s];
    if (i < 0 || i >= num_samples())
      throw ConfigError("sample index " + std::to_string(i) + " out of range");
    X.col(static_cast<Index>(s)) = features_.col(i);
    Y.row(static_cast<Index>(s)) = labels_.row(i);
  }
  return Dataset(std::move(X), std::move(Y), task_, feature_names_, label_names_, has_bias_row_);
}

Dataset Dataset::select_features(const std::vector<Index>& indices) const {
  const Index plain = has_bias_row_ ? num_features() - 1 : num_features();
  if (indices.empty()) throw ConfigError("feature selection is empty");
  std::set<Index> seen;
  for (Index j : indices) {
    if (j < 0 || j >= plain) throw ConfigError("feature index " + std::to_string(j) + " out of range");
    if (!seen.insert(j).second) throw ConfigError("duplicate feature index " + std::to_string(j));
  }
  const Index rows = static_cast<Index>(indices.size()) + (has_bias_row_ ? 1 : 0);
  Matrix X(rows, num_samples());
  std::vector<std::string> names;
  for (std::size_t s = 0; s < indices.size(); ++s) {
    X.row(static_cast<Index>(s)) = features_.row(indices[s]);
    names.push_back(feature_names_[static_cast<std::size_t>(indices[s])]);
  }
  if (has_bias_row_) {
    X.row(rows - 1) = features_.row(num_features() - 1);
    names.push_back(feature_names_.back());
  }
  return Dataset(std::move(X), labels_, task_, std::move(names), label_names_, has_bias_row_);
}

void Splits::validate(Index n) const {
  if (train.empty() || validation.empty() || test.empty())
    throw ConfigError("every split must be non-empty");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto* part : {&train, &validation, &test}) {
    for (Index i : *part) {
      if (i < 0 || i >= n) throw ConfigError("split index " + std::to_string(i) + " out of range");
      auto& flag = seen[static_cast<std::size_t>(i)];
      if (flag) throw ConfigError("split index " + std::to_string(i) + " appears twice");
      flag = 1;
    }
  }
}

// ---------------------------------------------------------------------------
// CSV

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv(in, schema);
}

Dataset read_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto field : split_fields(line, ',')) header.emplace_back(trim(field));
    break;
  }
  if (header.empty()) throw ParseError(line_no, "missing header line");

  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!column_of.emplace(header[c], c).second)
      throw ParseError(1, "duplicate column name '" + header[c] + "'");
  }
  if (schema.label_columns.empty()) throw ConfigError("schema declares no label columns");

  std::vector<std::size_t> label_cols;
  for (const auto& name : schema.label_columns) {
    auto it = column_of.find(name);
    if (it == column_of.end()) throw DataError("label column '" + name + "' not found in header");
    label_cols.push_back(it->second);
  }
  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    std::set<std::size_t> label_set(label_cols.begin(), label_cols.end());
    for (std::size_t c = 0; c < header.size(); ++c)
      if (!label_set.count(c)) feature_cols.push_back(c);
  } else {
    for (const auto& name : schema.feature_columns) {
      auto it = column_of.find(name);
      if (it == column_of.end()) throw DataError("feature column '" + name + "' not found in header");
      feature_cols.push_back(it->second);
    }
  }
  if (feature_cols.empty()) throw DataError("no feature columns");

  std::vector<double> values;  // row-major, samples x features
  std::vector<int> labels;     // row-major, samples x labels
  bool saw_zero = false;
  bool saw_minus_one = false;
  Index n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
    for (std::size_t c : feature_cols) {
      const auto v = parse_real(fields[c]);
      if (!v) throw ParseError(line_no, "cannot parse '" + std::string(fields[c]) + "' as a number");
      if (!std::isfinite(*v))
        throw DataError("line " + std::to_string(line_no) + ": non-finite feature value in column '" +
                        header[c] + "'");
      values.push_back(*v);
    }
    for (std::size_t c : label_cols) {
      const auto v = parse_real(fields[c]);
      if (!v) throw ParseError(line_no, "cannot parse label '" + std::string(fields[c]) + "'");
      if (*v != -1.0 && *v != 0.0 && *v != 1.0)
        throw LabelDomainError("line " + std::to_string(line_no) + ": label " +
                               std::string(trim(fields[c])) + " is not in {-1, +1} or {0, 1}");
      const int label = static_cast<int>(*v);
      saw_zero |= label == 0;
      saw_minus_one |= label == -1;
      labels.push_back(label);
    }
    ++n;
  }
  if (saw_zero && saw_minus_one)
    throw LabelDomainError("labels mix 0 and -1; use either {-1, +1} or {0, 1}");
  if (saw_zero) std::replace(labels.begin(), labels.end(), 0, -1);
  if (n < 2) throw DataError("dataset needs at least 2 samples, got " + std::to_string(n));

  const Index d = static_cast<Index>(feature_cols.size());
  const Index m = static_cast<Index>(label_cols.size());
  Matrix X(d, n);
  LabelMatrix Y(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) X(j, i) = values[static_cast<std::size_t>(i * d + j)];
    for (Index k = 0; k < m; ++k) Y(i, k) = labels[static_cast<std::size_t>(i * m + k)];
  }
  std::vector<std::string> feature_names;
  for (std::size_t c : feature_cols) feature_names.push_back(header[c]);
  std::vector<std::string> label_names;
  for (std::size_t c : label_cols) label_names.push_back(header[c]);

  const bool bias = feature_names.back() == kBiasFeatureName && (X.row(d - 1).array() == 1.0).all();
  return Dataset(std::move(X), std::move(Y), schema.task, std::move(feature_names),
                 std::move(label_names), bias);
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(out, ds);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  const auto& names = ds.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  for (const auto& name : ds.label_names()) out << ',' << name;
  out << '\n';
  for (Index i = 0; i < ds.num_samples(); ++i) {
    for (Index j = 0; j < ds.num_features(); ++j)
      out << (j ? "," : "") << format_real(ds.features()(j, i));
    for (Index k = 0; k < ds.num_labels(); ++k) out << ',' << ds.labels()(i, k);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Splitting

std::vector<Index> stratum_keys(const LabelMatrix& labels) {
  std::vector<Index> keys(static_cast<std::size_t>(labels.rows()), labels.cols());
  for (Index i = 0; i < labels.rows(); ++i) {
    for (Index k = 0; k < labels.cols(); ++k) {
      if (labels(i, k) == 1) {
        keys[static_cast<std::size_t>(i)] = k;
        break;
      }
    }
  }
  // Binary: a single column, so "no positive label" is the negative class.
  return keys;
}

Splits split(const Dataset& ds, double val_fraction, double test_fraction, std::uint64_t seed,
             bool stratified) {
  if (!(val_fraction > 0.0) || !(test_fraction > 0.0) || !(val_fraction + test_fraction < 1.0))
    throw ConfigError("split fractions must satisfy 0 < val, 0 < test, val + test < 1");

  const Index n = ds.num_samples();
  std::mt19937_64 rng(seed);
  Splits out;
  out.seed = seed;

  auto carve = [&](std::vector<Index>& pool, bool keep_each) {
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto size = static_cast<Index>(pool.size());
    Index n_test = std::llround(test_fraction * static_cast<double>(size));
    if (keep_each) n_test = std::clamp<Index>(n_test, 1, size - 2);
    Index n_val = std::llround(val_fraction * static_cast<double>(size - n_test));
    if (keep_each) n_val = std::clamp<Index>(n_val, 1, size - n_test - 1);
    out.test.insert(out.test.end(), pool.begin(), pool.begin() + n_test);
    out.validation.insert(out.validation.end(), pool.begin() + n_test, pool.begin() + n_test + n_val);
    out.train.insert(out.train.end(), pool.begin() + n_test + n_val, pool.end());
  };

  if (stratified) {
    std::map<Index, std::vector<Index>> strata;
    const auto keys = stratum_keys(ds.labels());
    for (Index i = 0; i < n; ++i) strata[keys[static_cast<std::size_t>(i)]].push_back(i);
    for (const auto& [key, members] : strata) {
      if (members.size() < 3)
        throw ConfigError("stratification impossible: class " + std::to_string(key) + " has only " +
                          std::to_string(members.size()) + " samples (need at least 3)");
    }
    for (auto& [key, members] : strata) carve(members, true);
  } else {
    std::vector<Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    carve(all, false);
  }
  if (out.train.empty() || out.validation.empty() || out.test.empty())
    throw ConfigError("split leaves an empty partition; use more samples or larger fractions");

  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

void write_manifest(const std::filesystem::path& path, const Splits& splits) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_manifest(out, splits);
}

void write_manifest(std::ostream& out, const Splits& splits) {
  out << "seed: " << splits.seed << '\n';
  auto line = [&](const char* tag, const std::vector<Index>& idx) {
    out << tag;
    for (Index i : idx) out << ' ' << i;
    out << '\n';
  };
  line("train:", splits.train);
  line("val:", splits.validation);
  line("test:", splits.test);
}

Splits read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_manifest(in);
}

Splits read_manifest(std::istream& in) {
  Splits s;
  bool have_train = false, have_val = false, have_test = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'tag: indices'");
    const auto tag = trim(text.substr(0, colon));
    const auto body = trim(text.substr(colon + 1));
    if (tag == "seed") {
      const auto v = parse_unsigned(body);
      if (!v) throw ParseError(line_no, "seed line needs exactly one non-negative integer");
      s.seed = *v;
      continue;
    }
    std::istringstream rest{std::string(body)};
    std::vector<Index> idx;
    std::string tok;
    while (rest >> tok) {
      const auto v = parse_integer(tok);
      if (!v || *v < 0) throw ParseError(line_no, "bad index '" + tok + "'");
      idx.push_back(static_cast<Index>(*v));
    }
    if (tag == "train") {
      s.train = std::move(idx);
      have_train = true;
    } else if (tag == "val") {
      s.validation = std::move(idx);
      have_val = true;
    } else if (tag == "test") {
      s.test = std::move(idx);
      have_test = true;
    } else {
      throw ParseError(line_no, "unknown tag '" + std::string(tag) + "'");
    }
  }
  if (!have_train || !have_val || !have_test)
    throw ParseError(line_no, "manifest must contain train:, val: and test: lines");
  return s;
}

// ---------------------------------------------------------------------------
// Synthetic data

SyntheticSpec SyntheticSpec::overlapping_boxes(double overlap) {
  SyntheticSpec spec;
  spec.informative.push_back({{0.0, 1.0}, {1.0 - overlap, 2.0 - overlap}});
  spec.noise = {0.0, 1.0};
  return spec;
}

SyntheticSpec SyntheticSpec::shifted_minority(Index count, double shift) {
  if (count < 1) throw ConfigError("shifted_minority needs at least one informative feature");
  SyntheticSpec spec;
  spec.informative.assign(static_cast<std::size_t>(count), {{0.0, 1.0}, {shift, 1.0 + shift}});
  spec.positive = PositiveClass::Minority;
  return spec;
}

SyntheticSpec SyntheticSpec::two_feature_toy() {
  SyntheticSpec spec;
  spec.informative = {{{0.0, 1.0}, {-1.3, -1.1}}, {{0.0, 0.3}, {-0.6, 0.05}}};
  spec.positive = PositiveClass::Majority;
  return spec;
}

Dataset gen_synthetic_binary(Index n_minority, double ratio, Index d, const SyntheticSpec& spec,
                             std::uint64_t seed) {
  if (n_minority < 2) throw ConfigError("n_minority must be at least 2");
  if (!(ratio >= 1.0) || !std::isfinite(ratio)) throw ConfigError("ratio must be a finite value >= 1");
  if (d < 2) throw ConfigError("d must be at least 2");
  if (spec.informative.empty())
    throw ConfigError("synthetic spec has no informative feature: classes cannot be separated");
  if (static_cast<Index>(spec.informative.size()) > d)
    throw ConfigError("synthetic spec declares more informative features than d");

  auto check = [](const Interval& iv, const char* what) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
      throw ConfigError(std::string("invalid ") + what + " interval");
  };
  check(spec.noise, "noise");
  bool separable = false;
  for (const auto& f : spec.informative) {
    check(f.majority, "majority");
    check(f.minority, "minority");
    separable |= f.majority.lo != f.minority.lo || f.majority.hi != f.minority.hi;
  }
  if (!separable)
    throw ConfigError("every informative feature uses the same box for both classes: "
                      "classes cannot be separated");

  const Index n_majority = std::llround(ratio * static_cast<double>(n_minority));
  const Index n = n_majority + n_minority;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](const Interval& iv) { return iv.lo + (iv.hi - iv.lo) * unit(rng); };

  const int majority_label = spec.positive == PositiveClass::Majority ? 1 : -1;
  Matrix X(d, n);
  LabelMatrix Y(n, 1);
  const auto informative = static_cast<Index>(spec.informative.size());
  for (Index i = 0; i < n; ++i) {
    const bool majority = i < n_majority;
    Y(i, 0) = majority ? majority_label : -majority_label;
    for (Index j = 0; j < d; ++j) {
      if (j < informative) {
        const auto& f = spec.informative[static_cast<std::size_t>(j)];
        X(j, i) = draw(majority ? f.majority : f.minority);
      } else {
        X(j, i) = draw(spec.noise);
      }
    }
  }

  // Interleave the classes so files and prefixes are not sorted by label.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  Matrix Xs(d, n);
  LabelMatrix Ys(n, 1);
  for (Index i = 0; i < n; ++i) {
    Xs.col(i) = X.col(order[static_cast<std::size_t>(i)]);
    Ys(i, 0) = Y(order[static_cast<std::size_t>(i)], 0);
  }
  return Dataset(std::move(Xs), std::move(Ys), Task::Binary);
}

Dataset append_bias(const Dataset& ds) {
  if (ds.has_bias_row()) throw ConfigError("dataset already has a bias row");
  Matrix X(ds.num_features() + 1, ds.num_samples());
  X.topRows(ds.num_features()) = ds.features();
  X.row(ds.num_features()).setOnes();
  auto names = ds.feature_names();
  names.emplace_back(kBiasFeatureName);
  return Dataset(std::move(X), ds.labels(), ds.task(), std::move(names), ds.label_names(), true);
}

ClassPriors class_priors(const LabelMatrix& labels) {
  ClassPriors priors;
  priors.P.resize(labels.cols());
  const double n = static_cast<double>(labels.rows());
  for (Index k = 0; k < labels.cols(); ++k)
    priors.P(k) = n > 0 ? static_cast<double>((labels.col(k).array() == 1).count()) / n : 0.0;
  return priors;
}

ClassPriors class_priors(const Dataset& ds) { return class_priors(ds.labels()); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(stream));
}

}  // namespace csfs
