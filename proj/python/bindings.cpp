#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "csfs/cost_gen.hpp"
#include "csfs/data_model.hpp"
#include "csfs/error.hpp"
#include "csfs/evaluation.hpp"
#include "csfs/fmeasure.hpp"
#include "csfs/solver.hpp"
#include "csfs/sweep.hpp"

namespace py = pybind11;
using namespace csfs;

namespace {

using Ranking = std::vector<std::pair<Index, double>>;

Ranking to_pairs(const std::vector<RankedFeature>& ranking) {
  Ranking out;
  out.reserve(ranking.size());
  for (const auto& f : ranking) out.emplace_back(f.index, f.score);
  return out;
}

std::vector<RankedFeature> from_pairs(const Ranking& pairs) {
  std::vector<RankedFeature> out;
  out.reserve(pairs.size());
  for (const auto& [index, score] : pairs) out.push_back({index, score});
  return out;
}

SyntheticSpec make_spec(const std::string& preset, double overlap, Index informative, double shift,
                        const std::optional<std::string>& positive) {
  SyntheticSpec spec;
  if (preset == "overlap") spec = SyntheticSpec::overlapping_boxes(overlap);
  else if (preset == "shifted") spec = SyntheticSpec::shifted_minority(informative, shift);
  else if (preset == "toy") spec = SyntheticSpec::two_feature_toy();
  else throw ConfigError("unknown preset '" + preset + "'");
  if (positive) {
    if (*positive == "majority") spec.positive = PositiveClass::Majority;
    else if (*positive == "minority") spec.positive = PositiveClass::Minority;
    else throw ConfigError("positive must be 'majority' or 'minority'");
  }
  return spec;
}

Index resolve_ref_class(const LabelMatrix& labels, Task task, std::optional<Index> ref_class) {
  if (ref_class) return *ref_class;
  return task == Task::MultiClass ? default_ref_class(class_priors(labels)) : 0;
}

}  // namespace

PYBIND11_MODULE(_csfs, m) {
  m.doc() = "Cost-sensitive feature selection for imbalanced classification";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  auto data_error = py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", data_error.ptr());
  py::register_exception<LabelDomainError>(m, "LabelDomainError", data_error.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
  py::register_exception<UndefinedMeasureError>(m, "UndefinedMeasureError", error.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", numerical.ptr());

  py::enum_<Task>(m, "Task")
      .value("Binary", Task::Binary)
      .value("MultiClass", Task::MultiClass)
      .value("MultiLabel", Task::MultiLabel);

  py::enum_<CostVariant>(m, "CostVariant")
      .value("Binary", CostVariant::Binary)
      .value("MultiLabelMicro", CostVariant::MultiLabelMicro)
      .value("MultiClassMicro", CostVariant::MultiClassMicro);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Matrix, LabelMatrix, Task, std::vector<std::string>, std::vector<std::string>,
                    bool>(),
           py::arg("features"), py::arg("labels"), py::arg("task"),
           py::arg("feature_names") = std::vector<std::string>{},
           py::arg("label_names") = std::vector<std::string>{}, py::arg("has_bias_row") = false)
      .def_property_readonly("features", &Dataset::features)
      .def_property_readonly("labels", &Dataset::labels)
      .def_property_readonly("task", &Dataset::task)
      .def_property_readonly("feature_names", &Dataset::feature_names)
      .def_property_readonly("label_names", &Dataset::label_names)
      .def_property_readonly("has_bias_row", &Dataset::has_bias_row)
      .def_property_readonly("num_features", &Dataset::num_features)
      .def_property_readonly("num_samples", &Dataset::num_samples)
      .def_property_readonly("num_labels", &Dataset::num_labels)
      .def("subset", &Dataset::subset, py::arg("indices"))
      .def("select_features", &Dataset::select_features, py::arg("indices"))
      .def("__repr__", [](const Dataset& ds) {
        return "<Dataset " + std::string(to_string(ds.task())) + " d=" +
               std::to_string(ds.num_features()) + " n=" + std::to_string(ds.num_samples()) +
               " m=" + std::to_string(ds.num_labels()) + ">";
      });

  py::class_<Splits>(m, "Splits")
      .def(py::init<>())
      .def_readwrite("train", &Splits::train)
      .def_readwrite("validation", &Splits::validation)
      .def_readwrite("test", &Splits::test)
      .def_readwrite("seed", &Splits::seed)
      .def("validate", &Splits::validate, py::arg("n"));

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, std::vector<std::string> labels, Task task,
         std::vector<std::string> features) {
        return load_csv(path, CsvSchema{std::move(labels), std::move(features), task});
      },
      py::arg("path"), py::arg("labels") = std::vector<std::string>{"y"},
      py::arg("task") = Task::Binary, py::arg("features") = std::vector<std::string>{});
  m.def("save_csv", &save_csv, py::arg("path"), py::arg("dataset"));
  m.def("split", &split, py::arg("dataset"), py::arg("val_fraction"), py::arg("test_fraction"),
        py::arg("seed"), py::arg("stratified") = true);
  m.def("read_manifest", py::overload_cast<const std::filesystem::path&>(&read_manifest),
        py::arg("path"));
  m.def("write_manifest",
        py::overload_cast<const std::filesystem::path&, const Splits&>(&write_manifest),
        py::arg("path"), py::arg("splits"));
  m.def(
      "gen_synthetic_binary",
      [](Index n_minority, double ratio, Index d, const std::string& preset, double overlap,
         Index informative, double shift, const std::optional<std::string>& positive,
         std::uint64_t seed) {
        return gen_synthetic_binary(n_minority, ratio, d,
                                    make_spec(preset, overlap, informative, shift, positive), seed);
      },
      py::arg("n_minority"), py::arg("ratio"), py::arg("d") = 2, py::arg("preset") = "overlap",
      py::arg("overlap") = 0.5, py::arg("informative") = 10, py::arg("shift") = 0.3,
      py::arg("positive") = py::none(), py::arg("seed") = 0);
  m.def("append_bias", &append_bias, py::arg("dataset"));

  py::class_<CostVector>(m, "CostVector")
      .def_readonly("a", &CostVector::a)
      .def_readonly("r", &CostVector::r)
      .def_readonly("beta", &CostVector::beta)
      .def_readonly("variant", &CostVector::variant)
      .def_readonly("ref_class", &CostVector::ref_class);

  m.def("discretize", &discretize, py::arg("T"), py::arg("beta") = 1.0);
  m.def("cost_vector", &make_cost_vector, py::arg("variant"), py::arg("r"), py::arg("beta") = 1.0,
        py::arg("m") = 1, py::arg("ref_class") = 0);
  m.def("build_cost_matrix", &build_cost_matrix, py::arg("labels"), py::arg("cost"));

  m.def(
      "error_profile",
      [](const LabelMatrix& predictions, const LabelMatrix& labels) {
        const ErrorProfile e = error_profile(confusion(predictions, labels));
        return std::make_pair(Vector(e.e), Vector(e.priors.P));
      },
      py::arg("predictions"), py::arg("labels"),
      "Returns (e, P): interleaved false-negative and false-positive rates and class priors.");
  m.def(
      "f_measure",
      [](const LabelMatrix& predictions, const LabelMatrix& labels, Task task, double beta,
         std::optional<Index> ref_class) {
        return task_f_measure(predictions, labels, task, beta,
                              resolve_ref_class(labels, task, ref_class));
      },
      py::arg("predictions"), py::arg("labels"), py::arg("task") = Task::Binary,
      py::arg("beta") = 1.0, py::arg("ref_class") = py::none());
  m.def(
      "macro_f",
      [](const LabelMatrix& predictions, const LabelMatrix& labels, double beta) {
        return macro_f(confusion(predictions, labels), beta);
      },
      py::arg("predictions"), py::arg("labels"), py::arg("beta") = 1.0);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("zeta", &SolverConfig::zeta)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("rel_tol", &SolverConfig::rel_tol)
      .def_readwrite("seed", &SolverConfig::seed);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("W", &FitResult::W)
      .def_readonly("objective_trace", &FitResult::objective_trace)
      .def_readonly("initial_objective", &FitResult::initial_objective)
      .def_readonly("iterations_used", &FitResult::iterations_used)
      .def_readonly("converged", &FitResult::converged);

  m.def(
      "fit",
      [](const Matrix& X, const Matrix& Y, const Matrix& C, const SolverConfig& config,
         const std::optional<Matrix>& warm_start) {
        py::gil_scoped_release release;
        return fit(X, Y, C, config, warm_start);
      },
      py::arg("X"), py::arg("Y"), py::arg("C"), py::arg("config") = SolverConfig{},
      py::arg("warm_start") = py::none());
  m.def("objective", &objective, py::arg("W"), py::arg("X"), py::arg("Y"), py::arg("C"),
        py::arg("lambda_"));
  m.def("predict", &predict, py::arg("W"), py::arg("X"), py::arg("task") = Task::Binary);

  py::class_<SweepOptions>(m, "SweepOptions")
      .def(py::init<>())
      .def_readwrite("T", &SweepOptions::T)
      .def_readwrite("beta", &SweepOptions::beta)
      .def_readwrite("variant", &SweepOptions::variant)
      .def_readwrite("ref_class", &SweepOptions::ref_class)
      .def_readwrite("solver", &SweepOptions::solver)
      .def_readwrite("warm_start", &SweepOptions::warm_start)
      .def_readwrite("workers", &SweepOptions::workers);

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("r", &SweepRecord::r)
      .def_readonly("costs", &SweepRecord::costs)
      .def_readonly("fit", &SweepRecord::fit)
      .def_readonly("validation_f", &SweepRecord::validation_f)
      .def_readonly("failure", &SweepRecord::failure)
      .def_property_readonly("ok", &SweepRecord::ok);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("records", &SweepResult::records)
      .def_readonly("best", &SweepResult::best)
      .def_readonly("best_r", &SweepResult::best_r)
      .def_readonly("best_W", &SweepResult::best_W)
      .def_property_readonly("best_f", &SweepResult::best_f)
      .def_property_readonly("ranking", [](const SweepResult& r) { return to_pairs(r.ranking); })
      .def_readonly("variant", &SweepResult::variant)
      .def_readonly("ref_class", &SweepResult::ref_class);

  m.def(
      "run_sweep",
      [](const Dataset& ds, const Splits& splits, const SweepOptions& options) {
        py::gil_scoped_release release;
        return run_sweep(ds, splits, options);
      },
      py::arg("dataset"), py::arg("splits"), py::arg("options") = SweepOptions{});
  m.def(
      "rank_features",
      [](const Matrix& W, bool bias_flag) { return to_pairs(rank_features(W, bias_flag)); },
      py::arg("W"), py::arg("bias_flag") = false,
      "Returns (feature index, row norm) pairs, highest norm first.");
  m.def(
      "select_top_k",
      [](const Ranking& ranking, Index k) { return select_top_k(from_pairs(ranking), k); },
      py::arg("ranking"), py::arg("k"));

  py::class_<EvalOptions>(m, "EvalOptions")
      .def(py::init<>())
      .def_readwrite("repeats", &EvalOptions::repeats)
      .def_readwrite("seed", &EvalOptions::seed)
      .def_readwrite("ridge", &EvalOptions::ridge)
      .def_readwrite("beta", &EvalOptions::beta)
      .def_readwrite("ref_class", &EvalOptions::ref_class)
      .def_readwrite("stratified", &EvalOptions::stratified);

  py::class_<EvalReport>(m, "EvalReport")
      .def_property_readonly("method", [](const EvalReport& r) { return to_string(r.method); })
      .def_readonly("k", &EvalReport::k)
      .def_readonly("selected", &EvalReport::selected)
      .def_readonly("seeds", &EvalReport::seeds)
      .def_property_readonly("accuracy", [](const EvalReport& r) { return r.accuracy.values; })
      .def_property_readonly("f_measure", [](const EvalReport& r) { return r.f_measure.values; })
      .def_property_readonly("accuracy_mean", [](const EvalReport& r) { return r.accuracy.mean; })
      .def_property_readonly("accuracy_std", [](const EvalReport& r) { return r.accuracy.std; })
      .def_property_readonly("f_mean", [](const EvalReport& r) { return r.f_measure.mean; })
      .def_property_readonly("f_std", [](const EvalReport& r) { return r.f_measure.std; })
      .def_readonly("train_indices", &EvalReport::train_indices)
      .def_readonly("test_indices", &EvalReport::test_indices);

  m.def("downstream_eval", &downstream_eval, py::arg("dataset"), py::arg("splits"),
        py::arg("selected"), py::arg("options") = EvalOptions{});
  m.def(
      "equal_cost_ranking",
      [](const Dataset& ds, const Splits& splits, const SolverConfig& config) {
        return to_pairs(equal_cost_ranking(ds, splits, config));
      },
      py::arg("dataset"), py::arg("splits"), py::arg("config") = SolverConfig{});
  m.def("baseline_equal_cost", &baseline_equal_cost, py::arg("dataset"), py::arg("splits"),
        py::arg("k"), py::arg("config") = SolverConfig{}, py::arg("options") = EvalOptions{});
}
