#pragma once

#include <span>
#include <string>
#include <vector>

#include "arnet/timeseries.hpp"

namespace arnet {

enum class Fitter { LeastSquares, SGD };

std::string to_string(Fitter fitter);
Fitter fitter_from_string(const std::string& name);

/// Result of fitting an AR(p) model by either route.
struct ARFit {
  std::vector<double> coefficients;  // most recent lag first
  double intercept = 0.0;
  int order = 0;
  Fitter fitter = Fitter::LeastSquares;
  double train_loss = 0.0;          // mean squared residual on the training data
  double wall_time_seconds = 0.0;
  std::vector<double> trace;        // per-epoch mean training loss; empty for least squares
};

/// Ordinary least squares on the lagged design matrix. The normal system is
/// solved through a pivoted LDLT factorization; a rank-deficient or severely
/// ill-conditioned design raises SingularSystem with the condition estimate.
ARFit fit_least_squares(const LaggedDataset& dataset, bool include_intercept = true);

/// One-step-ahead forecast c + sum_i w_i * lags_i (lags most recent first).
double predict_one_step(const ARFit& fit, std::span<const double> lags);

}  // namespace arnet
