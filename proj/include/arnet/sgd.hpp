#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "arnet/classic_ar.hpp"
#include "arnet/regularizer.hpp"
#include "arnet/timeseries.hpp"

namespace arnet {

enum class LrSchedule { Constant, OneCycle };

std::string to_string(LrSchedule schedule);
LrSchedule lr_schedule_from_string(const std::string& name);

/// Hyperparameters for mini-batch gradient descent. Defaults are tuned for
/// standardized data; standardization of the dataset inside fit_sgd is on by
/// default and the fitted intercept is mapped back to original units.
struct TrainConfig {
  int epochs = 25;
  int batch_size = 128;
  double learning_rate = 0.01;
  double momentum = 0.9;
  LrSchedule lr_schedule = LrSchedule::Constant;
  std::uint64_t rng_seed = 0;
  RegularizerConfig regularizer;
  bool standardize = true;

  void validate() const;
};

struct LossGrad {
  double loss = 0.0;                 // batch MSE + lambda * R(coefficients)
  Eigen::VectorXd coefficient_grad;  // (2/B) X^T (yhat - y) + lambda * dR
  double intercept_grad = 0.0;       // (2/B) sum(yhat - y); never regularized
};

/// Objective and analytic gradients for one mini-batch.
LossGrad loss_and_grad(const Eigen::Ref<const Eigen::MatrixXd>& batch_inputs,
                       const Eigen::Ref<const Eigen::VectorXd>& batch_targets,
                       const Eigen::Ref<const Eigen::VectorXd>& coefficients,
                       double intercept, double lambda, const RegularizerConfig& reg);

/// 1cycle-style schedule: linear warm-up from base/25 to base over the first
/// 30% of steps, then cosine annealing down to base/2500.
double one_cycle_learning_rate(double base_lr, long step, long total_steps);

/// Shuffled mini-batch gradient descent with momentum on the regularized MSE
/// objective. Deterministic given config.rng_seed. Throws Divergence when the
/// objective becomes non-finite.
ARFit fit_sgd(const LaggedDataset& dataset, const TrainConfig& config);

/// c_lambda ~= sqrt(L_hat) / 100 where L_hat is the noise variance estimated
/// from a short unregularized pilot fit (3 epochs) on the series.
double default_c_lambda(const TimeSeries& train_series, int pilot_order = 10);

}  // namespace arnet
