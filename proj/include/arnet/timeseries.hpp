#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arnet {

/// Ground-truth generative AR(p) model: y_t = c + sum_i w_i * y_{t-i} + e_t
/// with e_t ~ Normal(0, noise_std). Coefficients are ordered most recent lag
/// first (w_1 multiplies y_{t-1}).
struct ARProcessSpec {
  std::vector<double> coefficients;
  double intercept = 0.0;
  double noise_std = 1.0;

  int order() const { return static_cast<int>(coefficients.size()); }
  double coefficient_abs_sum() const;
  /// A spec is stable when sum_i |w_i| <= 1.
  bool stable() const;
  /// Throws InvalidArgument when empty, non-finite, or noise_std < 0.
  void validate() const;
};

/// Ordered real-valued observations plus generation provenance.
struct TimeSeries {
  std::vector<double> values;
  std::optional<std::uint64_t> seed;
  std::optional<ARProcessSpec> source_spec;
  std::optional<int> burn_in;
  std::vector<std::string> warnings;

  int length() const { return static_cast<int>(values.size()); }
  double mean() const;
  /// Population standard deviation (divides by n).
  double std_dev() const;
};

/// Regression view of a series for order-p fitting: row i holds the p lags
/// (y_{t-1}, ..., y_{t-p}) most recent first, targets holds y_t.
struct LaggedDataset {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd targets;
  int order = 0;

  int n_rows() const { return static_cast<int>(targets.size()); }
};

struct NormalizationStats {
  double mean = 0.0;
  double std = 1.0;

  double normalize(double x) const { return (x - mean) / std; }
  double denormalize(double z) const { return z * std + mean; }
};

/// Evaluates c + sum_j w_j * lags_j with a fixed accumulation order. The
/// generator and both fitters predict through this helper so that noiseless
/// data satisfies target == c + w . lags bit-exactly.
double ar_one_step(std::span<const double> coefficients, double intercept,
                   std::span<const double> lags);

/// Draws p coefficients ~ Uniform(-1, 1) and rescales them so that
/// sum_i |w_i| == target_abs_sum. target_abs_sum must lie in (0, 1].
std::vector<double> sample_coefficients(int p, double target_abs_sum, std::uint64_t rng_seed);

/// Default number of discarded warm-up samples: max(10 * order, 100).
int default_burn_in(int order);

/// Simulates the process for burn_in + n steps and keeps the last n values.
/// Pre-history is i.i.d. Normal(0, max(noise_std, 1)) unless an explicit
/// pre_history (length >= order, oldest first) is supplied. An unstable spec
/// is recorded as a warning on the returned series, not an error.
TimeSeries generate_ar_series(const ARProcessSpec& spec, int n, int burn_in,
                              std::uint64_t rng_seed,
                              std::optional<std::vector<double>> pre_history = std::nullopt);

/// Splits into (first n_train values, remainder); order preserved.
std::pair<TimeSeries, TimeSeries> split_series(const TimeSeries& series, int n_train);

/// Rescales to mean 0, population std 1. Throws DegenerateInput on a
/// constant series.
std::pair<TimeSeries, NormalizationStats> standardize(const TimeSeries& series);

/// Inverse of standardize given the stored stats.
TimeSeries destandardize(const TimeSeries& series, const NormalizationStats& stats);

/// Builds the (length - p) x p lag matrix and target vector. Column j of
/// inputs holds y_{t-(j+1)}.
LaggedDataset make_lagged_dataset(const TimeSeries& series, int p);

}  // namespace arnet
