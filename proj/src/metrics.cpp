#include "arnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arnet/errors.hpp"

namespace arnet {

double stpe(std::span<const double> estimated, std::span<const double> truth) {
  const std::size_t len = std::max(estimated.size(), truth.size());
  if (len == 0) throw InvalidArgument("stpe: empty coefficient vectors");
  double abs_diff = 0.0;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double e = i < estimated.size() ? estimated[i] : 0.0;
    const double t = i < truth.size() ? truth[i] : 0.0;
    abs_diff += std::abs(e - t);
    abs_sum += std::abs(e) + std::abs(t);
  }
  if (abs_sum == 0.0) {
    throw UndefinedMetric("stpe: both coefficient vectors are all zero (0/0)");
  }
  return 100.0 * abs_diff / abs_sum;
}

std::vector<PredictionRecord> one_step_predictions(const ARFit& fit, const TimeSeries& test,
                                                   const TimeSeries& context) {
  const int p = fit.order;
  if (static_cast<int>(fit.coefficients.size()) != p) {
    throw InvalidArgument("one_step_predictions: malformed fit");
  }
  if (test.length() < 1) throw InvalidArgument("one_step_predictions: empty test segment");
  if (context.length() < p) {
    throw InvalidArgument(
        "one_step_predictions: context must supply at least fit.order values preceding the test "
        "segment");
  }

  const int n_context = context.length();
  // value at global index g, where the context immediately precedes the test segment
  auto value_at = [&](int g) {
    return g < n_context ? context.values[static_cast<std::size_t>(g)]
                         : test.values[static_cast<std::size_t>(g - n_context)];
  };

  std::vector<PredictionRecord> out;
  out.reserve(static_cast<std::size_t>(test.length()));
  std::vector<double> lags(static_cast<std::size_t>(p));
  for (int i = 0; i < test.length(); ++i) {
    const int g = n_context + i;
    for (int j = 0; j < p; ++j) lags[static_cast<std::size_t>(j)] = value_at(g - 1 - j);
    PredictionRecord rec;
    rec.index = i;
    rec.actual = test.values[static_cast<std::size_t>(i)];
    rec.predicted = ar_one_step(fit.coefficients, fit.intercept, lags);
    rec.residual = rec.actual - rec.predicted;
    out.push_back(rec);
  }
  return out;
}

double forecast_mse(const ARFit& fit, const TimeSeries& test, const TimeSeries& context) {
  const auto predictions = one_step_predictions(fit, test, context);
  double sse = 0.0;
  for (const auto& rec : predictions) sse += rec.residual * rec.residual;
  return sse / static_cast<double>(predictions.size());
}

std::set<int> recovered_support(const ARFit& fit, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("recovered_support: threshold must be > 0");
  std::set<int> support;
  for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
    if (std::abs(fit.coefficients[i]) >= threshold) support.insert(static_cast<int>(i) + 1);
  }
  return support;
}

EvaluationReport evaluate_forecast(const ARFit& fit, const TimeSeries& test,
                                   const TimeSeries& context,
                                   std::optional<std::vector<double>> true_coefficients,
                                   double support_threshold) {
  const auto predictions = one_step_predictions(fit, test, context);

  EvaluationReport report;
  double sse = 0.0;
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& rec : predictions) {
    sse += rec.residual * rec.residual;
    sum += rec.residual;
    lo = std::min(lo, rec.residual);
    hi = std::max(hi, rec.residual);
  }
  const double n = static_cast<double>(predictions.size());
  report.test_mse = sse / n;
  report.residual_summary.mean = sum / n;
  double var = 0.0;
  for (const auto& rec : predictions) {
    const double d = rec.residual - report.residual_summary.mean;
    var += d * d;
  }
  report.residual_summary.std = std::sqrt(var / n);
  report.residual_summary.min = lo;
  report.residual_summary.max = hi;
  report.recovered_support = recovered_support(fit, support_threshold);
  if (true_coefficients) {
    report.stpe = stpe(fit.coefficients, *true_coefficients);
  }
  return report;
}

}  // namespace arnet
