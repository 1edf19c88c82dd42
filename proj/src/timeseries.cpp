#include "arnet/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arnet/errors.hpp"
#include "arnet/rng.hpp"

namespace arnet {

double ARProcessSpec::coefficient_abs_sum() const {
  double sum = 0.0;
  for (double w : coefficients) sum += std::abs(w);
  return sum;
}

bool ARProcessSpec::stable() const { return coefficient_abs_sum() <= 1.0; }

void ARProcessSpec::validate() const {
  if (coefficients.empty()) throw InvalidArgument("ARProcessSpec: order must be >= 1");
  for (double w : coefficients) {
    if (!std::isfinite(w)) throw InvalidArgument("ARProcessSpec: non-finite coefficient");
  }
  if (!std::isfinite(intercept)) throw InvalidArgument("ARProcessSpec: non-finite intercept");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw InvalidArgument("ARProcessSpec: noise_std must be >= 0");
  }
}

double TimeSeries::mean() const {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double TimeSeries::std_dev() const {
  if (values.empty()) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double ar_one_step(std::span<const double> coefficients, double intercept,
                   std::span<const double> lags) {
  if (coefficients.size() != lags.size()) {
    throw InvalidArgument("ar_one_step: lag vector length does not match order");
  }
  double y = intercept;
  for (std::size_t i = 0; i < coefficients.size(); ++i) y += coefficients[i] * lags[i];
  return y;
}

std::vector<double> sample_coefficients(int p, double target_abs_sum, std::uint64_t rng_seed) {
  if (p < 1) throw InvalidArgument("sample_coefficients: p must be >= 1");
  if (!(target_abs_sum > 0.0) || target_abs_sum > 1.0) {
    throw InvalidArgument("sample_coefficients: target_abs_sum must be in (0, 1]");
  }
  Rng rng(rng_seed);
  std::vector<double> w(static_cast<std::size_t>(p));
  double abs_sum = 0.0;
  do {
    abs_sum = 0.0;
    for (auto& wi : w) {
      wi = rng.uniform(-1.0, 1.0);
      abs_sum += std::abs(wi);
    }
  } while (abs_sum == 0.0);
  const double scale = target_abs_sum / abs_sum;
  for (auto& wi : w) wi *= scale;
  return w;
}

int default_burn_in(int order) { return std::max(10 * order, 100); }

TimeSeries generate_ar_series(const ARProcessSpec& spec, int n, int burn_in,
                              std::uint64_t rng_seed,
                              std::optional<std::vector<double>> pre_history) {
  spec.validate();
  if (n < 1) throw InvalidArgument("generate_ar_series: n must be >= 1");
  if (burn_in < 0) throw InvalidArgument("generate_ar_series: burn_in must be >= 0");
  const int p = spec.order();

  Rng rng(rng_seed);
  // history holds the p most recent values, oldest first
  std::vector<double> history(static_cast<std::size_t>(p));
  if (pre_history) {
    if (static_cast<int>(pre_history->size()) < p) {
      throw InvalidArgument("generate_ar_series: pre_history must supply at least order values");
    }
    std::copy(pre_history->end() - p, pre_history->end(), history.begin());
  } else {
    const double init_std = std::max(spec.noise_std, 1.0);
    for (auto& h : history) h = rng.normal(0.0, init_std);
  }

  TimeSeries out;
  out.values.reserve(static_cast<std::size_t>(n));
  out.seed = rng_seed;
  out.source_spec = spec;
  out.burn_in = burn_in;
  if (!spec.stable()) {
    out.warnings.push_back("unstable process: sum |w_i| > 1; generated values may grow without bound");
  }

  // history as a ring buffer; `pos` marks the oldest slot (next write)
  std::vector<double> lags(static_cast<std::size_t>(p));
  int pos = 0;
  for (int t = 0; t < burn_in + n; ++t) {
    for (int j = 0; j < p; ++j) {
      int idx = pos - 1 - j;
      if (idx < 0) idx += p;
      lags[static_cast<std::size_t>(j)] = history[static_cast<std::size_t>(idx)];
    }
    double y = ar_one_step(spec.coefficients, spec.intercept, lags);
    if (spec.noise_std > 0.0) y += rng.normal(0.0, spec.noise_std);
    history[static_cast<std::size_t>(pos)] = y;
    pos = (pos + 1) % p;
    if (t >= burn_in) out.values.push_back(y);
  }
  return out;
}

std::pair<TimeSeries, TimeSeries> split_series(const TimeSeries& series, int n_train) {
  if (n_train < 1 || n_train >= series.length()) {
    throw InvalidArgument("split_series: n_train must be in [1, length)");
  }
  TimeSeries train;
  TimeSeries test;
  train.values.assign(series.values.begin(), series.values.begin() + n_train);
  test.values.assign(series.values.begin() + n_train, series.values.end());
  train.seed = test.seed = series.seed;
  train.source_spec = test.source_spec = series.source_spec;
  train.burn_in = test.burn_in = series.burn_in;
  train.warnings = test.warnings = series.warnings;
  return {std::move(train), std::move(test)};
}

std::pair<TimeSeries, NormalizationStats> standardize(const TimeSeries& series) {
  if (series.length() < 1) throw InvalidArgument("standardize: series must be non-empty");
  NormalizationStats stats{series.mean(), series.std_dev()};
  if (!(stats.std > 0.0)) {
    throw DegenerateInput("standardize: constant series has zero variance");
  }
  TimeSeries out = series;
  for (auto& v : out.values) v = stats.normalize(v);
  return {std::move(out), stats};
}

TimeSeries destandardize(const TimeSeries& series, const NormalizationStats& stats) {
  TimeSeries out = series;
  for (auto& v : out.values) v = stats.denormalize(v);
  return out;
}

LaggedDataset make_lagged_dataset(const TimeSeries& series, int p) {
  if (p < 1) throw InvalidArgument("make_lagged_dataset: p must be >= 1");
  const int n = series.length();
  if (n <= p) throw InvalidArgument("make_lagged_dataset: series length must exceed p");
  for (double v : series.values) {
    if (!std::isfinite(v)) throw InvalidArgument("make_lagged_dataset: non-finite value in series");
  }

  const int rows = n - p;
  LaggedDataset ds;
  ds.order = p;
  ds.inputs.resize(rows, p);
  ds.targets.resize(rows);
  // column j holds y_{t-(j+1)}: a contiguous slice of the series
  for (int j = 0; j < p; ++j) {
    ds.inputs.col(j) =
        Eigen::Map<const Eigen::VectorXd>(series.values.data() + (p - 1 - j), rows);
  }
  ds.targets = Eigen::Map<const Eigen::VectorXd>(series.values.data() + p, rows);
  return ds;
}

}  // namespace arnet
