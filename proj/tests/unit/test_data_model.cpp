#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"

#include "csfs/data_model.hpp"
#include "csfs/error.hpp"

using namespace csfs;

namespace {

Dataset small_binary() {
  Matrix X(2, 4);
  X << 1, 2, 3, 4,
       5, 6, 7, 8;
  LabelMatrix Y(4, 1);
  Y << 1, -1, -1, 1;
  return Dataset(X, Y, Task::Binary);
}

Dataset labelled(const std::vector<int>& labels) {
  const auto n = static_cast<Index>(labels.size());
  Matrix X(1, n);
  LabelMatrix Y(n, 1);
  for (Index i = 0; i < n; ++i) {
    X(0, i) = static_cast<double>(i);
    Y(i, 0) = labels[static_cast<std::size_t>(i)];
  }
  return Dataset(X, Y, Task::Binary);
}

std::set<Index> as_set(const std::vector<Index>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("dataset construction enforces its invariants") {
  const Dataset ds = small_binary();
  CHECK(ds.num_features() == 2);
  CHECK(ds.num_samples() == 4);
  CHECK(ds.num_labels() == 1);
  CHECK(ds.feature_names() == std::vector<std::string>{"x1", "x2"});
  CHECK(ds.label_names() == std::vector<std::string>{"y"});

  Matrix X = Matrix::Zero(2, 3);
  LabelMatrix bad(3, 1);
  bad << 1, 0, -1;
  CHECK_THROWS_AS(Dataset(X, bad, Task::Binary), LabelDomainError);

  LabelMatrix two(3, 2);
  two << 1, -1, -1, 1, 1, -1;
  CHECK_THROWS_AS(Dataset(X, two, Task::Binary), DataError);

  LabelMatrix not_onehot(3, 2);
  not_onehot << 1, -1, 1, 1, -1, 1;
  CHECK_THROWS_AS(Dataset(X, not_onehot, Task::MultiClass), DataError);
  CHECK_NOTHROW(Dataset(X, not_onehot, Task::MultiLabel));

  Matrix inf = Matrix::Zero(2, 3);
  inf(1, 2) = std::numeric_limits<double>::infinity();
  LabelMatrix ok(3, 1);
  ok << 1, -1, 1;
  CHECK_THROWS_AS(Dataset(inf, ok, Task::Binary), DataError);
  CHECK_THROWS_AS(Dataset(X, LabelMatrix::Ones(2, 1), Task::Binary), ShapeError);
}

TEST_CASE("load_csv parses features and labels") {
  std::istringstream in("a,b,y\n1.5,2,1\n-3,4e-1,-1\n0,0,1\n");
  const Dataset ds = read_csv(in, {{"y"}, {}, Task::Binary});
  CHECK(ds.num_features() == 2);
  CHECK(ds.num_samples() == 3);
  CHECK(ds.task() == Task::Binary);
  CHECK(ds.features()(0, 0) == 1.5);
  CHECK(ds.features()(1, 1) == 0.4);
  CHECK(ds.labels()(1, 0) == -1);
  CHECK(ds.feature_names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_csv remaps 0/1 labels") {
  std::istringstream in("a,y\n1,0\n2,1\n3,0\n");
  const Dataset ds = read_csv(in, {{"y"}, {}, Task::Binary});
  CHECK(ds.labels()(0, 0) == -1);
  CHECK(ds.labels()(1, 0) == 1);
  CHECK(ds.labels()(2, 0) == -1);
}

TEST_CASE("load_csv reports malformed input") {
  SUBCASE("missing field names the line") {
    std::istringstream in("a,b,y\n1,2,1\n3,-1\n");
    try {
      read_csv(in, {{"y"}, {}, Task::Binary});
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }
  SUBCASE("non-finite feature") {
    std::istringstream in("a,y\n1,1\nnan,-1\n");
    CHECK_THROWS_AS(read_csv(in, {{"y"}, {}, Task::Binary}), DataError);
  }
  SUBCASE("label outside the domain") {
    std::istringstream in("a,y\n1,1\n2,2\n");
    CHECK_THROWS_AS(read_csv(in, {{"y"}, {}, Task::Binary}), LabelDomainError);
  }
  SUBCASE("mixed 0 and -1 labels") {
    std::istringstream in("a,y\n1,1\n2,0\n3,-1\n");
    CHECK_THROWS_AS(read_csv(in, {{"y"}, {}, Task::Binary}), LabelDomainError);
  }
  SUBCASE("unknown label column") {
    std::istringstream in("a,y\n1,1\n2,-1\n");
    CHECK_THROWS_AS(read_csv(in, {{"z"}, {}, Task::Binary}), DataError);
  }
}

TEST_CASE("csv round trip is bit-identical") {
  const Dataset ds = append_bias(gen_synthetic_binary(7, 2.5, 4, SyntheticSpec::overlapping_boxes(0.3), 11));
  std::stringstream buf;
  write_csv(buf, ds);
  const Dataset back = read_csv(buf, {{"y"}, {}, Task::Binary});
  CHECK(back.features() == ds.features());
  CHECK(back.labels() == ds.labels());
  CHECK(back.feature_names() == ds.feature_names());
  CHECK(back.has_bias_row());
}

TEST_CASE("split sizes follow the fractions") {
  const Dataset ds = labelled({1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1});
  const Splits s = split(ds, 1.0 / 3.0, 0.25, 7, false);
  CHECK(s.test.size() == 3);
  CHECK(s.validation.size() == 3);
  CHECK(s.train.size() == 6);
  CHECK_NOTHROW(s.validate(12));
}

TEST_CASE("split is deterministic per seed") {
  const Dataset ds = gen_synthetic_binary(20, 3.0, 3, SyntheticSpec::overlapping_boxes(0.5), 1);
  for (bool stratified : {false, true}) {
    const Splits a = split(ds, 1.0 / 3.0, 0.25, 42, stratified);
    const Splits b = split(ds, 1.0 / 3.0, 0.25, 42, stratified);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(a.test == b.test);
    const Splits c = split(ds, 1.0 / 3.0, 0.25, 43, stratified);
    CHECK((a.test != c.test || a.train != c.train));
  }
}

TEST_CASE("stratified split keeps every class in every part") {
  const Dataset ds = gen_synthetic_binary(12, 3.0, 2, SyntheticSpec::overlapping_boxes(0.5), 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Splits s = split(ds, 1.0 / 3.0, 0.25, seed, true);
    for (const auto* part : {&s.train, &s.validation, &s.test}) {
      int pos = 0, neg = 0;
      for (Index i : *part) (ds.labels()(i, 0) == 1 ? pos : neg)++;
      CHECK(pos > 0);
      CHECK(neg > 0);
    }
    std::vector<Index> all = s.train;
    all.insert(all.end(), s.validation.begin(), s.validation.end());
    all.insert(all.end(), s.test.begin(), s.test.end());
    CHECK(as_set(all).size() == all.size());
  }
}

TEST_CASE("split rejects impossible requests") {
  const Dataset ds = labelled({1, -1, -1, -1, -1, -1, 1, -1});
  CHECK_THROWS_AS(split(ds, 0.0, 0.25, 1), ConfigError);
  CHECK_THROWS_AS(split(ds, 0.5, 0.5, 1), ConfigError);
  CHECK_THROWS_AS(split(ds, 0.3, 0.25, 1, true), ConfigError);  // only two positives
}

TEST_CASE("split manifest round trip") {
  Splits s{{0, 4, 5}, {1, 3}, {2}, 18446744073709551615ull};
  std::stringstream buf;
  write_manifest(buf, s);
  const Splits back = read_manifest(buf);
  CHECK(back.train == s.train);
  CHECK(back.validation == s.validation);
  CHECK(back.test == s.test);
  CHECK(back.seed == s.seed);

  std::istringstream broken("train: 1 2\nval: 3\n");
  CHECK_THROWS_AS(read_manifest(broken), ParseError);
}

TEST_CASE("synthetic generator class counts") {
  SUBCASE("3:1 toy") {
    const Dataset ds = gen_synthetic_binary(50, 3.0, 2, SyntheticSpec::overlapping_boxes(0.2), 7);
    CHECK(ds.num_samples() == 200);
    CHECK(ds.num_features() == 2);
    CHECK((ds.labels().array() == 1).count() == 150);
    CHECK((ds.labels().array() == -1).count() == 50);
  }
  SUBCASE("balanced") {
    const Dataset ds = gen_synthetic_binary(30, 1.0, 3, SyntheticSpec::overlapping_boxes(0.2), 7);
    CHECK((ds.labels().array() == 1).count() == 30);
  }
  SUBCASE("largest imbalance") {
    const Dataset ds = gen_synthetic_binary(150, 10.0, 5, SyntheticSpec::overlapping_boxes(0.2), 7);
    CHECK(ds.num_samples() == 1650);
    CHECK((ds.labels().array() == 1).count() == 1500);
  }
  SUBCASE("any seed, fractional ratio") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Dataset ds = gen_synthetic_binary(9, 2.5, 2, SyntheticSpec::overlapping_boxes(0.2), seed);
      CHECK((ds.labels().array() == 1).count() == 23);
      CHECK((ds.labels().array() == -1).count() == 9);
    }
  }
  SUBCASE("minority as positive class") {
    const Dataset ds = gen_synthetic_binary(10, 4.0, 3, SyntheticSpec::shifted_minority(2, 0.5), 7);
    CHECK((ds.labels().array() == 1).count() == 10);
  }
}

TEST_CASE("synthetic generator samples inside the boxes") {
  const auto spec = SyntheticSpec::two_feature_toy();
  const Dataset ds = gen_synthetic_binary(40, 3.0, 4, spec, 5);
  for (Index i = 0; i < ds.num_samples(); ++i) {
    const bool majority = ds.labels()(i, 0) == 1;
    for (Index j = 0; j < 2; ++j) {
      const auto& f = spec.informative[static_cast<std::size_t>(j)];
      const Interval box = majority ? f.majority : f.minority;
      CHECK(ds.features()(j, i) >= box.lo);
      CHECK(ds.features()(j, i) <= box.hi);
    }
    CHECK(ds.features()(3, i) >= 0.0);
    CHECK(ds.features()(3, i) <= 1.0);
  }
}

TEST_CASE("synthetic generator rejects degenerate configurations") {
  SyntheticSpec noise_only;
  CHECK_THROWS_AS(gen_synthetic_binary(10, 2.0, 3, noise_only, 1), ConfigError);
  SyntheticSpec same;
  same.informative.push_back({{0, 1}, {0, 1}});
  CHECK_THROWS_AS(gen_synthetic_binary(10, 2.0, 3, same, 1), ConfigError);
  CHECK_THROWS_AS(gen_synthetic_binary(1, 2.0, 3, SyntheticSpec::overlapping_boxes(0.1), 1), ConfigError);
  CHECK_THROWS_AS(gen_synthetic_binary(10, 0.5, 3, SyntheticSpec::overlapping_boxes(0.1), 1), ConfigError);
  CHECK_THROWS_AS(gen_synthetic_binary(10, 2.0, 1, SyntheticSpec::overlapping_boxes(0.1), 1), ConfigError);
}

TEST_CASE("append_bias adds a flagged row of ones once") {
  Matrix X(2, 3);
  X << 1, 2, 3, 4, 5, 6;
  LabelMatrix Y(3, 1);
  Y << 1, -1, 1;
  const Dataset ds = append_bias(Dataset(X, Y, Task::Binary));
  CHECK(ds.num_features() == 3);
  CHECK(ds.features().row(2) == Eigen::RowVector3d(1, 1, 1));
  CHECK(ds.has_bias_row());
  CHECK(ds.feature_names().back() == "__bias__");
  CHECK_THROWS_AS(append_bias(ds), ConfigError);
}

TEST_CASE("class priors") {
  SUBCASE("binary") {
    const Dataset ds = labelled({1, 1, 1, 1, -1, -1, -1, -1, -1, -1});
    CHECK(class_priors(ds).P(0) == doctest::Approx(0.4));
    CHECK(class_priors(append_bias(ds)).P == class_priors(ds).P);
  }
  SUBCASE("multi-class sums to one") {
    LabelMatrix Y(10, 2);
    for (Index i = 0; i < 10; ++i) Y.row(i) = i < 6 ? Eigen::RowVector2i(1, -1) : Eigen::RowVector2i(-1, 1);
    const Dataset ds(Matrix::Zero(1, 10), Y, Task::MultiClass);
    const auto P = class_priors(ds).P;
    CHECK(P(0) == doctest::Approx(0.6));
    CHECK(P(1) == doctest::Approx(0.4));
    CHECK(P.sum() == doctest::Approx(1.0));
  }
  SUBCASE("all-negative column") {
    LabelMatrix Y = LabelMatrix::Constant(4, 2, -1);
    Y(0, 0) = 1;
    const Dataset ds(Matrix::Zero(1, 4), Y, Task::MultiLabel);
    CHECK(class_priors(ds).P(1) == 0.0);
  }
}

TEST_CASE("subset and feature selection") {
  const Dataset ds = append_bias(small_binary());
  const Dataset sub = ds.subset({3, 0});
  CHECK(sub.num_samples() == 2);
  CHECK(sub.features()(0, 0) == 4);
  CHECK(sub.labels()(1, 0) == 1);
  const Dataset sel = ds.select_features({1});
  CHECK(sel.num_features() == 2);
  CHECK(sel.has_bias_row());
  CHECK(sel.feature_names() == std::vector<std::string>{"x2", "__bias__"});
  CHECK_THROWS_AS(ds.select_features({2}), ConfigError);
  CHECK_THROWS_AS(ds.select_features({0, 0}), ConfigError);
  CHECK_THROWS_AS(ds.subset({4}), ConfigError);
}

TEST_CASE("task names") {
  CHECK(parse_task("multiclass") == Task::MultiClass);
  CHECK(std::string(to_string(Task::MultiLabel)) == "multilabel");
  CHECK_THROWS_AS(parse_task("ternary"), ConfigError);
}
