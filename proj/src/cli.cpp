#include "arnet/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>

#include "arnet/errors.hpp"
#include "arnet/io.hpp"
#include "arnet/rng.hpp"

namespace arnet {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "no --seed given; using seed " << seed << " (pass --seed " << seed
            << " to reproduce)\n";
  return seed;
}

struct GenerateOptions {
  std::vector<double> coefficients;
  std::optional<int> order;
  double abs_sum = 0.9;
  double intercept = 0.0;
  double noise_std = 1.0;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> burn_in;
  std::string out;
  std::string sidecar;
  bool no_sidecar = false;
};

int run_generate(const GenerateOptions& opt) {
  if (opt.coefficients.empty() && !opt.order) {
    std::cerr << "generate: pass --coefficients or --order\n";
    return kExitUsage;
  }
  if (!opt.coefficients.empty() && opt.order &&
      *opt.order != static_cast<int>(opt.coefficients.size())) {
    std::cerr << "generate: --order " << *opt.order << " contradicts --coefficients length "
              << opt.coefficients.size() << "\n";
    return kExitUsage;
  }

  const std::uint64_t seed = pick_seed(opt.seed);
  ARProcessSpec spec;
  spec.coefficients = opt.coefficients.empty()
                          ? sample_coefficients(*opt.order, opt.abs_sum, mix_seed(seed, 0xC0EF))
                          : opt.coefficients;
  spec.intercept = opt.intercept;
  spec.noise_std = opt.noise_std;
  const int burn_in = opt.burn_in.value_or(default_burn_in(spec.order()));

  const TimeSeries series = generate_ar_series(spec, opt.n, burn_in, seed);
  for (const auto& warning : series.warnings) std::cerr << "warning: " << warning << "\n";

  const fs::path out_path(opt.out);
  write_series_csv(out_path, series);
  if (!opt.no_sidecar) {
    fs::path sidecar_path =
        opt.sidecar.empty() ? fs::path(out_path).replace_extension(".json") : fs::path(opt.sidecar);
    write_provenance_json(sidecar_path, series);
  }
  std::cout << "wrote " << series.length() << " values to " << out_path.string() << " (seed "
            << seed << ")\n";
  return kExitOk;
}

struct FitOptions {
  std::string input;
  std::string fitter;
  int order = 0;
  std::string out = "fit.json";
  bool no_intercept = false;
  std::vector<double> true_coefficients;
  std::string config_path;
  // TrainConfig overrides; only applied when the flag was actually given
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<double> learning_rate;
  std::optional<double> momentum;
  std::optional<std::string> schedule;
  std::optional<std::uint64_t> seed;
  std::optional<double> sparsity;
  std::optional<double> c_lambda;
  std::optional<std::string> regularizer;
  bool no_standardize = false;
};

TrainConfig resolve_train_config(const FitOptions& opt) {
  TrainConfig config;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw Error("cannot open config file '" + opt.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& err) {
      throw Error(std::string("cannot parse config file: ") + err.what());
    }
    config = train_config_from_json(j);
  }
  if (opt.epochs) config.epochs = *opt.epochs;
  if (opt.batch_size) config.batch_size = *opt.batch_size;
  if (opt.learning_rate) config.learning_rate = *opt.learning_rate;
  if (opt.momentum) config.momentum = *opt.momentum;
  if (opt.schedule) config.lr_schedule = lr_schedule_from_string(*opt.schedule);
  if (opt.seed) config.rng_seed = *opt.seed;
  if (opt.no_standardize) config.standardize = false;
  if (opt.regularizer) {
    config.regularizer.kind = regularizer_kind_from_string(*opt.regularizer);
  } else if (opt.sparsity) {
    config.regularizer.kind = RegularizerKind::SigmoidRoot;
  }
  if (opt.sparsity) config.regularizer.sparsity_estimate = *opt.sparsity;
  if (opt.c_lambda) config.regularizer.c_lambda = *opt.c_lambda;
  return config;
}

int run_fit(const FitOptions& opt) {
  const TimeSeries series = read_series_csv(opt.input);
  if (series.length() < opt.order + 2) {
    std::cerr << "fit: series has " << series.length() << " values; need at least order + 2 = "
              << opt.order + 2 << "\n";
    return kExitUsage;
  }
  const Fitter fitter = fitter_from_string(opt.fitter);
  const LaggedDataset dataset = make_lagged_dataset(series, opt.order);

  ARFit fit;
  if (fitter == Fitter::LeastSquares) {
    fit = fit_least_squares(dataset, !opt.no_intercept);
  } else {
    TrainConfig config = resolve_train_config(opt);
    if (config.regularizer.kind != RegularizerKind::None && !opt.c_lambda) {
      config.regularizer.c_lambda = default_c_lambda(series);
      std::cerr << "using c_lambda = " << config.regularizer.c_lambda
                << " estimated from the input series\n";
    }
    config.batch_size = std::min(config.batch_size, dataset.n_rows());
    fit = fit_sgd(dataset, config);
  }

  write_fit_json(opt.out, fit);
  std::cout << "fitter=" << to_string(fit.fitter) << " order=" << fit.order
            << " train_loss=" << fit.train_loss << " wall_time_seconds=" << fit.wall_time_seconds
            << "\n";
  if (!opt.true_coefficients.empty()) {
    std::cout << "stpe=" << stpe(fit.coefficients, opt.true_coefficients) << "\n";
  }
  std::cout << "wrote " << opt.out << "\n";
  return kExitOk;
}

struct EvaluateOptions {
  std::string fit_path;
  std::string test_path;
  std::string context_path;
  std::string input_path;
  int split = 0;
  std::vector<double> true_coefficients;
  double threshold = kSupportThreshold;
  std::string residuals_path;
  std::string out;
};

int run_evaluate(const EvaluateOptions& opt) {
  const ARFit fit = read_fit_json(opt.fit_path);

  TimeSeries test;
  TimeSeries context;
  if (!opt.input_path.empty()) {
    if (opt.split <= 0) {
      std::cerr << "evaluate: --input requires --split\n";
      return kExitUsage;
    }
    const TimeSeries all = read_series_csv(opt.input_path);
    if (opt.split >= all.length()) {
      std::cerr << "evaluate: --split must be smaller than the series length\n";
      return kExitUsage;
    }
    auto parts = split_series(all, opt.split);
    context = std::move(parts.first);
    test = std::move(parts.second);
  } else {
    if (opt.test_path.empty() || opt.context_path.empty()) {
      std::cerr << "evaluate: pass --test and --context, or --input with --split\n";
      return kExitUsage;
    }
    test = read_series_csv(opt.test_path);
    context = read_series_csv(opt.context_path);
  }

  std::optional<std::vector<double>> truth;
  if (!opt.true_coefficients.empty()) truth = opt.true_coefficients;
  const EvaluationReport report =
      evaluate_forecast(fit, test, context, truth, opt.threshold);

  const json j = report_to_json(report);
  std::cout << j.dump(2) << "\n";
  if (!opt.out.empty()) {
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw Error("cannot open '" + opt.out + "' for writing");
    out << j.dump(2) << "\n";
  }
  if (!opt.residuals_path.empty()) {
    write_residuals_csv(opt.residuals_path, one_step_predictions(fit, test, context));
  }
  return kExitOk;
}

struct ExperimentOptions {
  std::string name;
  std::string out_dir;
  std::vector<int> p_values;
  std::optional<int> n_train;
  std::optional<int> n_test;
  std::optional<int> repeats;
  std::optional<double> noise_std;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> fitters;
  double abs_sum = 0.9;
  std::optional<double> sparsity;
  std::optional<double> c_lambda;
  std::string config_path;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<double> learning_rate;
  std::optional<double> momentum;
  std::optional<std::string> schedule;
};

ExperimentSpec default_experiment_spec(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.name = kind;
  switch (kind) {
    case ExperimentKind::DenseSweep:
      spec.p_values = {1, 5, 10, 25};
      break;
    case ExperimentKind::SparseSweep:
      spec.p_values = {3, 10, 30, 100, 300};
      break;
    case ExperimentKind::SmallData:
      spec.p_values = {20};
      spec.n_train = 1000;
      spec.n_test = 1000;
      spec.repeats = 10;
      break;
    case ExperimentKind::Timing:
      spec.p_values = {10, 20, 40, 80, 160, 320};
      spec.n_test = 2000;
      break;
  }
  return spec;
}

void print_experiment_summary(const ExperimentResult& result) {
  // median stpe / mse per (p, fitter)
  std::map<std::pair<int, Fitter>, std::vector<std::pair<double, double>>> by_key;
  for (const auto& rec : result.records) {
    if (rec.failed) {
      std::cout << "failed: p=" << rec.p_model << " fitter=" << to_string(rec.fitter) << " ("
                << rec.error << ")\n";
      continue;
    }
    by_key[{rec.p_model, rec.fitter}].push_back({rec.stpe, rec.test_mse});
  }
  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  };
  for (const auto& [key, metrics] : by_key) {
    std::vector<double> stpes;
    std::vector<double> mses;
    for (const auto& [s, m] : metrics) {
      stpes.push_back(s);
      mses.push_back(m);
    }
    std::cout << "p=" << key.first << " fitter=" << to_string(key.second)
              << " median_stpe=" << median_of(stpes) << " median_test_mse=" << median_of(mses)
              << " runs=" << metrics.size() << "\n";
  }
  if (result.spec.name == ExperimentKind::Timing) {
    for (Fitter fitter : result.spec.fitters) {
      try {
        std::cout << "scaling_exponent(" << to_string(fitter)
                  << ")=" << estimate_scaling_exponent(result.records, fitter) << "\n";
      } catch (const InsufficientData&) {
        // fewer than 3 p values; nothing to report
      }
    }
  }
}

int run_experiment_cmd(const ExperimentOptions& opt) {
  const ExperimentKind kind = experiment_kind_from_string(opt.name);
  ExperimentSpec spec = default_experiment_spec(kind);

  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw Error("cannot open config file '" + opt.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& err) {
      throw Error(std::string("cannot parse config file: ") + err.what());
    }
    spec.train_config = train_config_from_json(j);
  }
  if (!opt.p_values.empty()) spec.p_values = opt.p_values;
  if (opt.n_train) spec.n_train = *opt.n_train;
  if (opt.n_test) spec.n_test = *opt.n_test;
  if (opt.repeats) spec.repeats = *opt.repeats;
  if (opt.noise_std) spec.noise_std = *opt.noise_std;
  spec.base_seed = pick_seed(opt.seed);
  spec.coefficient_abs_sum = opt.abs_sum;
  if (!opt.fitters.empty()) {
    spec.fitters.clear();
    for (const auto& name : opt.fitters) spec.fitters.push_back(fitter_from_string(name));
  }
  if (opt.sparsity) spec.sparsity_override = *opt.sparsity;
  if (opt.c_lambda) {
    spec.auto_c_lambda = false;
    spec.train_config.regularizer.c_lambda = *opt.c_lambda;
  }
  if (opt.epochs) spec.train_config.epochs = *opt.epochs;
  if (opt.batch_size) spec.train_config.batch_size = *opt.batch_size;
  if (opt.learning_rate) spec.train_config.learning_rate = *opt.learning_rate;
  if (opt.momentum) spec.train_config.momentum = *opt.momentum;
  if (opt.schedule) spec.train_config.lr_schedule = lr_schedule_from_string(*opt.schedule);

  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);

  const ExperimentResult result = run_experiment(spec);
  write_records_csv(out_dir / "records.csv", result.records);
  if (!result.coefficients.empty()) {
    write_coefficients_csv(out_dir / "coefficients.csv", result.coefficients);
  }
  write_manifest_json(out_dir / "manifest.json", result);

  print_experiment_summary(result);
  std::cout << "wrote " << (out_dir / "records.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"Auto-regressive time-series fitting: least squares and sparse SGD"};
  app.set_version_flag("--version", "arnet 0.1.0");
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic AR series CSV");
  generate->add_option("--coefficients", gen.coefficients, "True AR coefficients w_1,...,w_p")
      ->delimiter(',');
  generate->add_option("--order", gen.order, "Process order p (coefficients sampled)");
  generate->add_option("--abs-sum", gen.abs_sum, "Target sum |w_i| for sampled coefficients");
  generate->add_option("--intercept", gen.intercept, "Process intercept c");
  generate->add_option("--noise-std", gen.noise_std, "Noise standard deviation");
  generate->add_option("--n", gen.n, "Number of samples to keep")->required();
  generate->add_option("--seed", gen.seed, "RNG seed (random and logged when omitted)");
  generate->add_option("--burn-in", gen.burn_in, "Discarded warm-up samples (default max(10p, 100))");
  generate->add_option("--out", gen.out, "Output CSV path")->required();
  generate->add_option("--sidecar", gen.sidecar, "Provenance JSON path (default: out with .json)");
  generate->add_flag("--no-sidecar", gen.no_sidecar, "Skip the provenance sidecar");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an AR(p) model to a series CSV");
  fit_cmd->add_option("--input", fit.input, "Input series CSV")->required();
  fit_cmd->add_option("--fitter", fit.fitter, "classic (least squares) or sgd")->required();
  fit_cmd->add_option("--order", fit.order, "Model order p")->required();
  fit_cmd->add_option("--out", fit.out, "Output fit JSON (default fit.json)");
  fit_cmd->add_flag("--no-intercept", fit.no_intercept, "Fit without an intercept (classic only)");
  fit_cmd->add_option("--true-coefficients", fit.true_coefficients, "Print sTPE against these")
      ->delimiter(',');
  fit_cmd->add_option("--config", fit.config_path, "TrainConfig JSON; flags take precedence");
  fit_cmd->add_option("--epochs", fit.epochs, "SGD epochs");
  fit_cmd->add_option("--batch-size", fit.batch_size, "SGD mini-batch size");
  fit_cmd->add_option("--learning-rate", fit.learning_rate, "SGD learning rate");
  fit_cmd->add_option("--momentum", fit.momentum, "SGD momentum in [0, 1)");
  fit_cmd->add_option("--schedule", fit.schedule, "constant or one-cycle");
  fit_cmd->add_option("--seed", fit.seed, "SGD RNG seed");
  fit_cmd->add_option("--sparsity", fit.sparsity,
                      "Estimated sparsity s in (0, 1]; enables the sigmoid-root regularizer");
  fit_cmd->add_option("--c-lambda", fit.c_lambda,
                      "Regularization strength (estimated from the data when omitted)");
  fit_cmd->add_option("--regularizer", fit.regularizer, "none, sigmoid-root, or sqrt-alt");
  fit_cmd->add_flag("--no-standardize", fit.no_standardize, "Skip internal standardization");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a fit on a test segment");
  eval_cmd->add_option("--fit", eval.fit_path, "Fit JSON")->required();
  eval_cmd->add_option("--test", eval.test_path, "Test series CSV");
  eval_cmd->add_option("--context", eval.context_path,
                       "Series CSV immediately preceding the test segment");
  eval_cmd->add_option("--input", eval.input_path, "Single CSV to split into context/test");
  eval_cmd->add_option("--split", eval.split, "Context length when using --input");
  eval_cmd->add_option("--true-coefficients", eval.true_coefficients, "Include sTPE in the report")
      ->delimiter(',');
  eval_cmd->add_option("--threshold", eval.threshold, "Support threshold on |w_i|");
  eval_cmd->add_option("--residuals", eval.residuals_path, "Write per-step residual CSV here");
  eval_cmd->add_option("--out", eval.out, "Write the report JSON here as well");

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment family");
  exp_cmd->add_option("--name", exp.name, "dense-sweep, sparse-sweep, small-data, or timing")
      ->required();
  exp_cmd->add_option("--out-dir", exp.out_dir, "Output directory")->required();
  exp_cmd->add_option("--p", exp.p_values, "Model orders to sweep")->delimiter(',');
  exp_cmd->add_option("--n-train", exp.n_train, "Training samples");
  exp_cmd->add_option("--n-test", exp.n_test, "Test samples");
  exp_cmd->add_option("--repeats", exp.repeats, "Seeds per p");
  exp_cmd->add_option("--noise-std", exp.noise_std, "Process noise standard deviation");
  exp_cmd->add_option("--seed", exp.seed, "Base seed (random and logged when omitted)");
  exp_cmd->add_option("--fitters", exp.fitters, "Subset of classic,sgd")->delimiter(',');
  exp_cmd->add_option("--abs-sum", exp.abs_sum, "Sum |w_i| for sampled coefficients");
  exp_cmd->add_option("--sparsity", exp.sparsity, "Override the small-data sparsity estimate");
  exp_cmd->add_option("--c-lambda", exp.c_lambda, "Fixed c_lambda (disables the pilot estimate)");
  exp_cmd->add_option("--config", exp.config_path, "TrainConfig JSON; flags take precedence");
  exp_cmd->add_option("--epochs", exp.epochs, "SGD epochs");
  exp_cmd->add_option("--batch-size", exp.batch_size, "SGD mini-batch size");
  exp_cmd->add_option("--learning-rate", exp.learning_rate, "SGD learning rate");
  exp_cmd->add_option("--momentum", exp.momentum, "SGD momentum");
  exp_cmd->add_option("--schedule", exp.schedule, "constant or one-cycle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(generate)) return run_generate(gen);
    if (app.got_subcommand(fit_cmd)) return run_fit(fit);
    if (app.got_subcommand(eval_cmd)) return run_evaluate(eval);
    if (app.got_subcommand(exp_cmd)) return run_experiment_cmd(exp);
  } catch (const SingularSystem& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumerical;
  } catch (const Divergence& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int cli_run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("arnet");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& arg : full) argv.push_back(arg.c_str());
  return cli_run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace arnet
