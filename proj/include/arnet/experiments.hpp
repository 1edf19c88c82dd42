#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arnet/classic_ar.hpp"
#include "arnet/sgd.hpp"
#include "arnet/timeseries.hpp"

namespace arnet {

enum class ExperimentKind { DenseSweep, SparseSweep, SmallData, Timing };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Declarative description of one experiment family run.
struct ExperimentSpec {
  ExperimentKind name = ExperimentKind::DenseSweep;
  std::vector<int> p_values;       // model orders, strictly increasing
  int n_train = 20000;
  int n_test = 5000;
  int repeats = 5;
  double noise_std = 1.0;
  std::optional<ARProcessSpec> true_process;  // fixed generating process, when applicable
  std::vector<Fitter> fitters = {Fitter::LeastSquares, Fitter::SGD};
  TrainConfig train_config;
  std::uint64_t base_seed = 1;     // every record seed derives from this
  double coefficient_abs_sum = 0.9;  // |w| budget when coefficients are sampled
  bool auto_c_lambda = true;       // estimate c_lambda per series from a pilot fit
  std::optional<double> sparsity_override;  // small-data only: force a given s

  void validate() const;
};

/// One fitted model on one generated series.
struct RunRecord {
  std::string experiment;
  int p_model = 0;
  int p_true = 0;       // order of the generating process
  double sparsity = 1.0;  // active true lags / model order
  std::uint64_t seed = 0;
  Fitter fitter = Fitter::LeastSquares;
  double stpe = 0.0;
  double test_mse = 0.0;
  double wall_time_seconds = 0.0;
  bool failed = false;
  std::string error;
};

/// One fitted coefficient next to its true value, for weight-profile plots.
struct LagCoefficientRecord {
  int lag = 0;  // 1-based
  double true_w = 0.0;
  double fitted_w = 0.0;
  Fitter fitter = Fitter::LeastSquares;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RunRecord> records;
  std::vector<LagCoefficientRecord> coefficients;
};

/// Fresh random coefficients per (p, repeat); model order equals true order.
ExperimentResult run_dense_sweep(const ExperimentSpec& spec);

/// Fixed low-order process, model order swept upward; SGD runs with the
/// sigmoid-root regularizer at s = p_true / p_model. The configured peak
/// learning rate is scaled by min(1, 100 / p_model) so very wide models do
/// not inflate their spurious weights mid-run faster than the anneal can
/// drain them.
ExperimentResult run_sparse_sweep(const ExperimentSpec& spec);

/// 1000-sample regime with true weights [0.2, 0.3, -0.5] at lags {1, 3, 10}
/// and a model of order 20 by default.
ExperimentResult run_small_data(const ExperimentSpec& spec);

/// Wall-clock fit time per (p, repeat, fitter), one warm-up run discarded per
/// p; fit time covers lag-matrix construction plus the fit itself, never data
/// generation.
ExperimentResult run_timing(const ExperimentSpec& spec);

/// Dispatches on spec.name.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Slope of an OLS line through (log p, log median wall time) for the given
/// fitter. Requires timing data at >= 3 distinct p values.
double estimate_scaling_exponent(const std::vector<RunRecord>& records, Fitter fitter);

/// The sparse generating process used by the small-data experiment.
ARProcessSpec small_data_process(double noise_std);

/// Number of coefficients with magnitude above zero (the "active" lags).
int active_lag_count(const ARProcessSpec& process);

}  // namespace arnet
