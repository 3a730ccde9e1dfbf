// csfs: generate data, sweep cost-sensitive fits and evaluate the selected
// features against the equal-cost baseline.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csfs/data_model.hpp"
#include "csfs/error.hpp"
#include "csfs/evaluation.hpp"
#include "csfs/model_io.hpp"
#include "csfs/parallel.hpp"
#include "csfs/sweep.hpp"
#include "csfs/text_format.hpp"

namespace fs = std::filesystem;
using namespace csfs;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Config files hold plain "key = value" lines. Keys outside a [section]
// belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App& app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto active = app_.get_subcommands();
    if (active.empty()) return items;
    for (auto& item : items)
      if (item.parents.empty() && item.name != "++" && item.name != "--")
        item.parents.push_back(active.front()->get_name());
    return items;
  }

 private:
  const CLI::App& app_;
};

// CLI11 reads --config at the top level only; accept it after the
// subcommand name too.
std::vector<std::string> hoist_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      std::vector<std::string> moved{args[i], args[i + 1]};
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      args.insert(args.begin(), moved.begin(), moved.end());
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      std::string moved = args[i];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      args.insert(args.begin(), moved);
      break;
    }
  }
  std::reverse(args.begin(), args.end());  // App::parse(vector) consumes from the back
  return args;
}

struct DataArgs {
  std::string data;
  std::string manifest;
  std::vector<std::string> labels{"y"};
  std::string task = "binary";
  bool no_bias = false;
};

struct GenArgs {
  std::string out;
  Index n_min = 0;
  double ratio = 0.0;
  Index d = 2;
  std::uint64_t seed = 0;
  std::string preset = "overlap";
  double overlap = 0.5;
  Index informative = 10;
  double shift = 0.3;
  std::string positive;
  double val_fraction = 1.0 / 3.0;
  double test_fraction = 0.25;
  bool no_stratify = false;
};

struct SweepArgs {
  DataArgs in;
  std::string out;
  int T = 20;
  double beta = 1.0;
  std::vector<double> lambdas{1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  double zeta = 1e-8;
  int max_iter = 100;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  std::optional<Index> ref_class;
  bool warm_start = false;
  int workers = 0;
};

struct EvalArgs {
  DataArgs in;
  std::string model;
  std::string out;
  std::vector<Index> k;
  int repeats = 10;
  std::uint64_t seed = 0;
  double ridge = 1e-3;
  int max_iter = 100;
  double rel_tol = 1e-6;
  std::optional<Index> ref_class;
};

void add_data_options(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--data", a.data, "Dataset CSV with a header line")->required()->check(CLI::ExistingFile);
  cmd->add_option("--manifest", a.manifest, "Split manifest (default: splits.manifest beside the data)");
  cmd->add_option("--labels", a.labels, "Label column names")->delimiter(',')->capture_default_str();
  cmd->add_option("--task", a.task, "binary, multiclass or multilabel")->capture_default_str();
  cmd->add_flag("--no-bias", a.no_bias, "Do not append a constant bias feature");
}

struct Loaded {
  Dataset ds;
  Splits splits;
};

Loaded load(const DataArgs& a) {
  CsvSchema schema;
  schema.label_columns = a.labels;
  schema.task = parse_task(a.task);
  Dataset ds = load_csv(a.data, schema);
  if (!a.no_bias && !ds.has_bias_row()) ds = append_bias(ds);
  const fs::path manifest =
      a.manifest.empty() ? fs::path(a.data).parent_path() / "splits.manifest" : fs::path(a.manifest);
  Splits splits = read_manifest(manifest);
  splits.validate(ds.num_samples());
  return {std::move(ds), std::move(splits)};
}

std::ofstream open_output(const fs::path& dir, const char* name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw DataError("cannot write " + (dir / name).string());
  return out;
}

int cmd_gen(const GenArgs& a) {
  SyntheticSpec spec;
  if (a.preset == "overlap") {
    spec = SyntheticSpec::overlapping_boxes(a.overlap);
  } else if (a.preset == "shifted") {
    spec = SyntheticSpec::shifted_minority(a.informative, a.shift);
  } else if (a.preset == "toy") {
    spec = SyntheticSpec::two_feature_toy();
  } else {
    throw ConfigError("unknown preset '" + a.preset + "'");
  }
  if (a.positive == "majority") spec.positive = PositiveClass::Majority;
  else if (a.positive == "minority") spec.positive = PositiveClass::Minority;

  const Dataset ds = gen_synthetic_binary(a.n_min, a.ratio, a.d, spec, derive_seed(a.seed, 0));
  const Splits splits = split(ds, a.val_fraction, a.test_fraction, derive_seed(a.seed, 1), !a.no_stratify);
  auto csv = open_output(a.out, "dataset.csv");
  write_csv(csv, ds);
  auto manifest = open_output(a.out, "splits.manifest");
  write_manifest(manifest, splits);
  std::cerr << "wrote " << ds.num_samples() << " samples x " << ds.num_features() << " features to "
            << (fs::path(a.out) / "dataset.csv").string() << '\n';
  return kOk;
}

int cmd_sweep(SweepArgs a) {
  if (a.lambdas.empty()) throw ConfigError("the lambda grid is empty");
  const auto [ds, splits] = load(a.in);
  std::sort(a.lambdas.begin(), a.lambdas.end());
  a.lambdas.erase(std::unique(a.lambdas.begin(), a.lambdas.end()), a.lambdas.end());

  SweepOptions opt;
  opt.T = a.T;
  opt.beta = a.beta;
  opt.ref_class = a.ref_class;
  opt.warm_start = a.warm_start;
  opt.workers = a.workers > 0 ? a.workers : default_workers();
  opt.solver.zeta = a.zeta;
  opt.solver.max_iter = a.max_iter;
  opt.solver.rel_tol = a.rel_tol;
  opt.solver.seed = derive_seed(a.seed, 2);

  std::vector<SweepResult> results;
  std::optional<std::size_t> best;
  std::string failures;
  for (double lambda : a.lambdas) {
    opt.solver.lambda = lambda;
    try {
      results.push_back(run_sweep(ds, splits, opt));
    } catch (const NumericalError& e) {
      failures += "\n  lambda " + format_real(lambda) + ": " + e.what();
      results.emplace_back();
      continue;
    }
    const auto& res = results.back();
    std::cerr << "lambda " << format_real(lambda) << ": best r " << format_real(res.best_r)
              << ", validation F " << format_real(res.best_f()) << '\n';
    if (!best || res.best_f() > results[*best].best_f()) best = results.size() - 1;
  }
  if (!best) throw NumericalError("every (lambda, r) pair failed" + failures);

  auto out = open_output(a.out, "sweep.tsv");
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << "# lambda " << format_real(a.lambdas[i]) << '\n';
    if (results[i].records.empty()) {
      out << "# every r failed\n";
      continue;
    }
    write_sweep_records(out, results[i]);
  }
  const SweepResult& top = results[*best];
  out << "# best lambda " << format_real(a.lambdas[*best]) << " r " << format_real(top.best_r)
      << " validation_f " << format_real(top.best_f()) << '\n';
  write_ranking(out, top.ranking, ds.feature_names());

  const auto& rec = top.records[top.best];
  Model model;
  model.W = top.best_W;
  model.meta = {a.lambdas[*best], top.best_r, a.beta, a.zeta, opt.solver.seed,
                rec.fit.iterations_used, rec.fit.objective_trace.back(), ds.has_bias_row()};
  auto model_out = open_output(a.out, "model.txt");
  write_model(model_out, model);
  return kOk;
}

int cmd_eval(const EvalArgs& a, bool k_given) {
  const auto [ds, splits] = load(a.in);
  const Model model = read_model(fs::path(a.model));
  if (model.W.rows() != ds.num_features() || model.meta.has_bias_row != ds.has_bias_row())
    throw DataError("model has " + std::to_string(model.W.rows()) + " rows but the dataset has " +
                    std::to_string(ds.num_features()) + " features (bias handling must match)");
  const auto ours = rank_features(model.W, model.meta.has_bias_row);

  std::vector<Index> ks = a.k;
  const auto available = static_cast<Index>(ours.size());
  if (!k_given) {
    std::erase_if(ks, [&](Index k) { return k > available; });
    if (ks.empty()) ks.push_back(available);
  }
  for (Index k : ks)
    if (k < 1 || k > available)
      throw ConfigError("k = " + std::to_string(k) + " must lie in [1, " + std::to_string(available) + "]");

  SolverConfig cfg;
  cfg.lambda = model.meta.lambda;
  cfg.zeta = model.meta.zeta;
  cfg.seed = model.meta.seed;
  cfg.max_iter = a.max_iter;
  cfg.rel_tol = a.rel_tol;
  const auto baseline = equal_cost_ranking(ds, splits, cfg);

  EvalOptions opt;
  opt.repeats = a.repeats;
  opt.seed = a.seed;
  opt.ridge = a.ridge;
  opt.beta = model.meta.beta;
  opt.ref_class = a.ref_class;

  std::vector<EvalReport> reports;
  std::vector<Comparison> comparisons;
  for (Index k : ks) {
    EvalReport mine = downstream_eval(ds, splits, select_top_k(ours, k), opt);
    EvalReport base = downstream_eval(ds, splits, select_top_k(baseline, k), opt);
    base.method = Method::EqualCost;
    comparisons.push_back(compare_report(mine, base));
    std::cerr << "k " << k << ": F " << format_real(mine.f_measure.mean) << " vs "
              << format_real(base.f_measure.mean) << " (equal cost)\n";
    reports.push_back(std::move(mine));
    reports.push_back(std::move(base));
  }
  auto eval_out = open_output(a.out, "eval.tsv");
  write_eval_reports(eval_out, reports);
  auto curve_out = open_output(a.out, "curve.tsv");
  write_curve(curve_out, reports);
  auto cmp_out = open_output(a.out, "compare.tsv");
  write_comparisons(cmp_out, comparisons);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-sensitive feature selection for imbalanced data", "csfs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic binary dataset and its split manifest");
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--n-min", gen.n_min, "Minority class size")->required();
  g->add_option("--ratio", gen.ratio, "Majority to minority ratio")->required();
  g->add_option("--d", gen.d, "Number of features")->capture_default_str();
  g->add_option("--seed", gen.seed, "Top-level seed")->capture_default_str();
  g->add_option("--preset", gen.preset, "overlap, shifted or toy")
      ->check(CLI::IsMember({"overlap", "shifted", "toy"}))
      ->capture_default_str();
  g->add_option("--overlap", gen.overlap, "overlap preset: width shared by the two boxes")->capture_default_str();
  g->add_option("--informative", gen.informative, "shifted preset: informative features")->capture_default_str();
  g->add_option("--shift", gen.shift, "shifted preset: minority offset")->capture_default_str();
  g->add_option("--positive", gen.positive, "Positive class (default depends on the preset)")
      ->check(CLI::IsMember({"majority", "minority"}));
  g->add_option("--val-fraction", gen.val_fraction, "Validation share of the training pool")->capture_default_str();
  g->add_option("--test-fraction", gen.test_fraction, "Test share of all samples")->capture_default_str();
  g->add_flag("--no-stratify", gen.no_stratify, "Split without stratifying by class");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Fit one model per (lambda, r) and rank features by the best");
  add_data_options(s, sweep.in);
  s->add_option("--out", sweep.out, "Output directory")->required();
  s->add_option("--T", sweep.T, "Number of r values")->capture_default_str();
  s->add_option("--beta", sweep.beta, "F-measure beta")->capture_default_str();
  s->add_option("--lambda", sweep.lambdas, "Regularisation grid")->delimiter(',');
  s->add_option("--zeta", sweep.zeta, "Smoothing perturbation")->capture_default_str();
  s->add_option("--max-iter", sweep.max_iter, "Iteration cap per fit")->capture_default_str();
  s->add_option("--rel-tol", sweep.rel_tol, "Relative objective change to stop at")->capture_default_str();
  s->add_option("--seed", sweep.seed, "Top-level seed")->capture_default_str();
  s->add_option("--ref-class", sweep.ref_class, "Multi-class reference class (0-based)");
  s->add_flag("--warm-start", sweep.warm_start, "Start each r from the previous solution");
  s->add_option("--workers", sweep.workers, "Worker threads (default: CSFS_WORKERS or all cores)");

  EvalArgs eval;
  for (Index k = 20; k <= 120; k += 10) eval.k.push_back(k);
  auto* e = app.add_subcommand("eval", "Compare the model's top-k features with the equal-cost baseline");
  add_data_options(e, eval.in);
  e->add_option("--model", eval.model, "Model file written by sweep")->required()->check(CLI::ExistingFile);
  e->add_option("--out", eval.out, "Output directory")->required();
  auto* k_opt = e->add_option("--k", eval.k, "Feature counts (default 20,30,...,120)")->delimiter(',');
  e->add_option("--repeats", eval.repeats, "Seeded re-splits per k")->capture_default_str();
  e->add_option("--seed", eval.seed, "Split seed of the first re-split")->capture_default_str();
  e->add_option("--ridge", eval.ridge, "Ridge constant of the downstream classifier")->capture_default_str();
  e->add_option("--max-iter", eval.max_iter, "Iteration cap of the baseline fit")->capture_default_str();
  e->add_option("--rel-tol", eval.rel_tol, "Stopping threshold of the baseline fit")->capture_default_str();
  e->add_option("--ref-class", eval.ref_class, "Multi-class reference class (0-based)");

  app.set_config("--config", "", "Read options from a file of 'key = value' lines");
  app.config_formatter(std::make_shared<SubcommandConfig>(app));
  app.allow_config_extras(false);
  for (auto* cmd : {g, s, e}) cmd->allow_config_extras(false);

  try {
    app.parse(hoist_config(argc, argv));
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_sweep(sweep);
    if (*e) return cmd_eval(eval, k_opt->count() > 0);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kNumerical;
  } catch (const UndefinedMeasureError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kNumerical;
  } catch (const Error& err) {
    std::cerr << "data error: " << err.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "data error: " << err.what() << '\n';
    return kData;
  }
  return kUsage;
}
