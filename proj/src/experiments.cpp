#include "arnet/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "arnet/errors.hpp"
#include "arnet/metrics.hpp"
#include "arnet/rng.hpp"

namespace arnet {

namespace {

// stream tags for deriving independent sub-seeds from a record seed
constexpr std::uint64_t kCoefficientStream = 0x01;
constexpr std::uint64_t kSeriesStream = 0x02;
constexpr std::uint64_t kSgdStream = 0x03;

std::vector<double> padded_truth(const ARProcessSpec& process, int p_model) {
  std::vector<double> truth(static_cast<std::size_t>(p_model), 0.0);
  std::copy(process.coefficients.begin(), process.coefficients.end(), truth.begin());
  return truth;
}

struct PreparedData {
  TimeSeries train;
  TimeSeries test;
  LaggedDataset dataset;
};

PreparedData prepare(const ARProcessSpec& process, const ExperimentSpec& spec, int p_model,
                     std::uint64_t record_seed) {
  const TimeSeries series =
      generate_ar_series(process, spec.n_train + spec.n_test, default_burn_in(process.order()),
                         mix_seed(record_seed, kSeriesStream));
  auto [train, test] = split_series(series, spec.n_train);
  LaggedDataset dataset = make_lagged_dataset(train, p_model);
  return {std::move(train), std::move(test), std::move(dataset)};
}

TrainConfig sgd_config_for_record(const ExperimentSpec& spec, std::uint64_t record_seed) {
  TrainConfig config = spec.train_config;
  config.rng_seed = mix_seed(record_seed, kSgdStream);
  return config;
}

RunRecord base_record(const ExperimentSpec& spec, int p_model, int p_true, double sparsity,
                      std::uint64_t seed, Fitter fitter) {
  RunRecord rec;
  rec.experiment = to_string(spec.name);
  rec.p_model = p_model;
  rec.p_true = p_true;
  rec.sparsity = sparsity;
  rec.seed = seed;
  rec.fitter = fitter;
  return rec;
}

void append_coefficients(std::vector<LagCoefficientRecord>& out,
                         const std::vector<double>& truth, const ARFit& fit,
                         std::uint64_t seed) {
  for (int lag = 1; lag <= fit.order; ++lag) {
    LagCoefficientRecord rec;
    rec.lag = lag;
    rec.true_w = truth[static_cast<std::size_t>(lag - 1)];
    rec.fitted_w = fit.coefficients[static_cast<std::size_t>(lag - 1)];
    rec.fitter = fit.fitter;
    rec.seed = seed;
    out.push_back(rec);
  }
}

// Fits one record; fitter errors are captured on the record, not thrown.
void run_one(const PreparedData& data, const std::vector<double>& truth,
             const TrainConfig& sgd_config, Fitter fitter, RunRecord rec,
             ExperimentResult& result) {
  try {
    const ARFit fit = fitter == Fitter::LeastSquares ? fit_least_squares(data.dataset)
                                                     : fit_sgd(data.dataset, sgd_config);
    rec.stpe = stpe(fit.coefficients, truth);
    rec.test_mse = forecast_mse(fit, data.test, data.train);
    rec.wall_time_seconds = fit.wall_time_seconds;
    append_coefficients(result.coefficients, truth, fit, rec.seed);
  } catch (const Error& err) {
    rec.failed = true;
    rec.error = err.what();
    rec.stpe = rec.test_mse = rec.wall_time_seconds = std::numeric_limits<double>::quiet_NaN();
  }
  result.records.push_back(std::move(rec));
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::DenseSweep: return "dense-sweep";
    case ExperimentKind::SparseSweep: return "sparse-sweep";
    case ExperimentKind::SmallData: return "small-data";
    case ExperimentKind::Timing: return "timing";
  }
  return "dense-sweep";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "dense-sweep" || name == "dense_sweep") return ExperimentKind::DenseSweep;
  if (name == "sparse-sweep" || name == "sparse_sweep") return ExperimentKind::SparseSweep;
  if (name == "small-data" || name == "small_data") return ExperimentKind::SmallData;
  if (name == "timing") return ExperimentKind::Timing;
  throw InvalidArgument("unknown experiment '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (p_values.empty()) throw InvalidArgument("ExperimentSpec: p_values must be non-empty");
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    if (p_values[i] < 1) throw InvalidArgument("ExperimentSpec: p_values must be positive");
    if (i > 0 && p_values[i] <= p_values[i - 1]) {
      throw InvalidArgument("ExperimentSpec: p_values must be strictly increasing");
    }
  }
  if (n_train < 2) throw InvalidArgument("ExperimentSpec: n_train must be >= 2");
  if (n_test < 1) throw InvalidArgument("ExperimentSpec: n_test must be >= 1");
  if (repeats < 1) throw InvalidArgument("ExperimentSpec: repeats must be >= 1");
  if (!(noise_std >= 0.0)) throw InvalidArgument("ExperimentSpec: noise_std must be >= 0");
  if (fitters.empty()) throw InvalidArgument("ExperimentSpec: fitters must be non-empty");
  train_config.validate();
  if (sparsity_override && (!(*sparsity_override > 0.0) || *sparsity_override > 1.0)) {
    throw InvalidArgument("ExperimentSpec: sparsity_override must be in (0, 1]");
  }
}

ARProcessSpec small_data_process(double noise_std) {
  ARProcessSpec process;
  process.coefficients.assign(10, 0.0);
  process.coefficients[0] = 0.2;   // lag 1
  process.coefficients[2] = 0.3;   // lag 3
  process.coefficients[9] = -0.5;  // lag 10
  process.intercept = 0.0;
  process.noise_std = noise_std;
  return process;
}

int active_lag_count(const ARProcessSpec& process) {
  int active = 0;
  for (double w : process.coefficients) {
    if (w != 0.0) ++active;
  }
  return active;
}

ExperimentResult run_dense_sweep(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.name != ExperimentKind::DenseSweep) {
    throw InvalidArgument("run_dense_sweep: spec.name must be dense-sweep");
  }
  ExperimentResult result;
  result.spec = spec;
  for (int p : spec.p_values) {
    for (int repeat = 0; repeat < spec.repeats; ++repeat) {
      const std::uint64_t seed =
          mix_seed(spec.base_seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(repeat));
      ARProcessSpec process;
      process.coefficients =
          sample_coefficients(p, spec.coefficient_abs_sum, mix_seed(seed, kCoefficientStream));
      process.noise_std = spec.noise_std;
      const PreparedData data = prepare(process, spec, p, seed);
      const auto truth = padded_truth(process, p);

      TrainConfig sgd_config = sgd_config_for_record(spec, seed);
      sgd_config.regularizer.kind = RegularizerKind::None;  // model order == true order
      for (Fitter fitter : spec.fitters) {
        run_one(data, truth, sgd_config, fitter,
                base_record(spec, p, p, 1.0, seed, fitter), result);
      }
    }
  }
  return result;
}

ExperimentResult run_sparse_sweep(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.name != ExperimentKind::SparseSweep) {
    throw InvalidArgument("run_sparse_sweep: spec.name must be sparse-sweep");
  }
  ARProcessSpec process =
      spec.true_process.value_or(ARProcessSpec{{0.2, 0.3, -0.5}, 0.0, spec.noise_std});
  process.validate();
  const int p_true = process.order();
  const int active = active_lag_count(process);

  ExperimentResult result;
  result.spec = spec;
  for (int p_model : spec.p_values) {
    if (p_model < p_true) {
      throw InvalidArgument("run_sparse_sweep: model order must be >= true order");
    }
    const double sparsity = static_cast<double>(active) / static_cast<double>(p_model);
    for (int repeat = 0; repeat < spec.repeats; ++repeat) {
      const std::uint64_t seed = mix_seed(spec.base_seed, static_cast<std::uint64_t>(p_model),
                                          static_cast<std::uint64_t>(repeat));
      const PreparedData data = prepare(process, spec, p_model, seed);
      const auto truth = padded_truth(process, p_model);

      TrainConfig sgd_config = sgd_config_for_record(spec, seed);
      sgd_config.regularizer.kind = RegularizerKind::SigmoidRoot;
      sgd_config.regularizer.sparsity_estimate = sparsity;
      if (spec.auto_c_lambda) {
        sgd_config.regularizer.c_lambda = default_c_lambda(data.train);
      }
      for (Fitter fitter : spec.fitters) {
        run_one(data, truth, sgd_config, fitter,
                base_record(spec, p_model, p_true, sparsity, seed, fitter), result);
      }
    }
  }
  return result;
}

ExperimentResult run_small_data(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.name != ExperimentKind::SmallData) {
    throw InvalidArgument("run_small_data: spec.name must be small-data");
  }
  ARProcessSpec process = spec.true_process.value_or(small_data_process(spec.noise_std));
  process.validate();
  const int p_true = process.order();
  const int active = active_lag_count(process);

  ExperimentResult result;
  result.spec = spec;
  for (int p_model : spec.p_values) {
    if (p_model < p_true) {
      throw InvalidArgument("run_small_data: model order must be >= true order");
    }
    const double sparsity = static_cast<double>(active) / static_cast<double>(p_model);
    const double s_used = spec.sparsity_override.value_or(sparsity);
    for (int repeat = 0; repeat < spec.repeats; ++repeat) {
      const std::uint64_t seed = mix_seed(spec.base_seed, static_cast<std::uint64_t>(p_model),
                                          static_cast<std::uint64_t>(repeat));
      const PreparedData data = prepare(process, spec, p_model, seed);
      const auto truth = padded_truth(process, p_model);

      TrainConfig sgd_config = sgd_config_for_record(spec, seed);
      sgd_config.regularizer.kind = RegularizerKind::SigmoidRoot;
      sgd_config.regularizer.sparsity_estimate = s_used;
      if (spec.auto_c_lambda) {
        sgd_config.regularizer.c_lambda = default_c_lambda(data.train);
      }
      for (Fitter fitter : spec.fitters) {
        run_one(data, truth, sgd_config, fitter,
                base_record(spec, p_model, p_true, sparsity, seed, fitter), result);
      }
    }
  }
  return result;
}

ExperimentResult run_timing(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.name != ExperimentKind::Timing) {
    throw InvalidArgument("run_timing: spec.name must be timing");
  }
  ExperimentResult result;
  result.spec = spec;
  for (int p : spec.p_values) {
    // generate all series for this p up front; generation stays outside the
    // timed region
    struct TimingCase {
      std::uint64_t seed;
      TimeSeries train;
      TimeSeries test;
      LaggedDataset dataset;
      std::vector<double> truth;
      TrainConfig sgd_config;
    };
    std::vector<TimingCase> cases;
    for (int repeat = 0; repeat < spec.repeats; ++repeat) {
      const std::uint64_t seed = mix_seed(spec.base_seed, static_cast<std::uint64_t>(p),
                                          static_cast<std::uint64_t>(repeat));
      ARProcessSpec process;
      process.coefficients =
          sample_coefficients(p, spec.coefficient_abs_sum, mix_seed(seed, kCoefficientStream));
      process.noise_std = spec.noise_std;
      const TimeSeries series =
          generate_ar_series(process, spec.n_train + spec.n_test, default_burn_in(p),
                             mix_seed(seed, kSeriesStream));
      auto [train, test] = split_series(series, spec.n_train);
      LaggedDataset dataset = make_lagged_dataset(train, p);
      TrainConfig sgd_config = sgd_config_for_record(spec, seed);
      sgd_config.regularizer.kind = RegularizerKind::None;
      cases.push_back({seed, std::move(train), std::move(test), std::move(dataset),
                       padded_truth(process, p), std::move(sgd_config)});
    }

    // fitters run sequentially: one discarded warm-up fit per (p, fitter),
    // then all timed repeats back to back; the fitter-reported wall time
    // covers normal-system/model construction plus the solve or epochs
    for (Fitter fitter : spec.fitters) {
      for (int repeat = -1; repeat < spec.repeats; ++repeat) {
        const bool warmup = repeat < 0;
        const TimingCase& tc = cases[static_cast<std::size_t>(std::max(repeat, 0))];
        RunRecord rec = base_record(spec, p, p, 1.0, tc.seed, fitter);
        try {
          const ARFit fit = fitter == Fitter::LeastSquares ? fit_least_squares(tc.dataset)
                                                           : fit_sgd(tc.dataset, tc.sgd_config);
          rec.wall_time_seconds = fit.wall_time_seconds;
          rec.stpe = stpe(fit.coefficients, tc.truth);
          rec.test_mse = forecast_mse(fit, tc.test, tc.train);
        } catch (const Error& err) {
          rec.failed = true;
          rec.error = err.what();
          rec.stpe = rec.test_mse = rec.wall_time_seconds =
              std::numeric_limits<double>::quiet_NaN();
        }
        if (!warmup) result.records.push_back(std::move(rec));
      }
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.name) {
    case ExperimentKind::DenseSweep: return run_dense_sweep(spec);
    case ExperimentKind::SparseSweep: return run_sparse_sweep(spec);
    case ExperimentKind::SmallData: return run_small_data(spec);
    case ExperimentKind::Timing: return run_timing(spec);
  }
  throw InvalidArgument("run_experiment: unknown experiment kind");
}

double estimate_scaling_exponent(const std::vector<RunRecord>& records, Fitter fitter) {
  std::map<int, std::vector<double>> times_by_p;
  for (const auto& rec : records) {
    if (rec.fitter != fitter || rec.failed) continue;
    if (!(rec.wall_time_seconds > 0.0) || !std::isfinite(rec.wall_time_seconds)) continue;
    times_by_p[rec.p_model].push_back(rec.wall_time_seconds);
  }
  if (times_by_p.size() < 3) {
    throw InsufficientData(
        "estimate_scaling_exponent: need timing data at >= 3 distinct p values");
  }

  std::vector<double> log_p;
  std::vector<double> log_t;
  for (auto& [p, times] : times_by_p) {
    std::sort(times.begin(), times.end());
    const std::size_t m = times.size();
    const double median =
        (m % 2 == 1) ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
    log_p.push_back(std::log(static_cast<double>(p)));
    log_t.push_back(std::log(median));
  }

  const double n = static_cast<double>(log_p.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    mean_x += log_p[i];
    mean_y += log_t[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    sxy += (log_p[i] - mean_x) * (log_t[i] - mean_y);
    sxx += (log_p[i] - mean_x) * (log_p[i] - mean_x);
  }
  return sxy / sxx;
}

}  // namespace arnet
