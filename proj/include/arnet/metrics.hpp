#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "arnet/classic_ar.hpp"
#include "arnet/timeseries.hpp"

namespace arnet {

struct ResidualSummary {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// One teacher-forced prediction on the test segment.
struct PredictionRecord {
  int index = 0;  // position within the test segment
  double actual = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
};

struct EvaluationReport {
  std::optional<double> stpe;  // set when the true coefficients are known
  double test_mse = 0.0;
  std::set<int> recovered_support;  // 1-based lag indices
  ResidualSummary residual_summary;
};

/// Default |w| threshold for calling a fitted weight non-zero (standardized
/// data).
inline constexpr double kSupportThreshold = 0.02;

/// Symmetrical total percentage error between coefficient vectors:
/// 100 * sum|e_i - t_i| / sum(|e_i| + |t_i|). The shorter vector is
/// zero-padded so a model of order p can be scored against a lower-order
/// truth. Throws UndefinedMetric when both vectors are all zero.
double stpe(std::span<const double> estimated, std::span<const double> truth);

/// One-step-ahead predictions over the test segment, always conditioning on
/// true preceding values (teacher forcing). context must supply at least
/// fit.order values immediately preceding the test segment.
std::vector<PredictionRecord> one_step_predictions(const ARFit& fit, const TimeSeries& test,
                                                   const TimeSeries& context);

/// Mean squared error of the teacher-forced one-step forecast.
double forecast_mse(const ARFit& fit, const TimeSeries& test, const TimeSeries& context);

/// 1-based lag indices with |w_i| >= threshold.
std::set<int> recovered_support(const ARFit& fit, double threshold);

/// Full report: forecast MSE, residual summary, recovered support, and sTPE
/// when the true coefficients are supplied.
EvaluationReport evaluate_forecast(const ARFit& fit, const TimeSeries& test,
                                   const TimeSeries& context,
                                   std::optional<std::vector<double>> true_coefficients = std::nullopt,
                                   double support_threshold = kSupportThreshold);

}  // namespace arnet
