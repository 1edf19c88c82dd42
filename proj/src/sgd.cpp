#include "arnet/sgd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "arnet/errors.hpp"
#include "arnet/rng.hpp"

namespace arnet {

std::string to_string(LrSchedule schedule) {
  return schedule == LrSchedule::Constant ? "constant" : "one_cycle";
}

LrSchedule lr_schedule_from_string(const std::string& name) {
  if (name == "constant") return LrSchedule::Constant;
  if (name == "one_cycle" || name == "one-cycle" || name == "onecycle") {
    return LrSchedule::OneCycle;
  }
  throw InvalidArgument("unknown learning rate schedule '" + name + "'");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("TrainConfig: epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("TrainConfig: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("TrainConfig: learning_rate must be > 0");
  if (!(momentum >= 0.0) || momentum >= 1.0) {
    throw InvalidArgument("TrainConfig: momentum must be in [0, 1)");
  }
  regularizer.validate();
}

LossGrad loss_and_grad(const Eigen::Ref<const Eigen::MatrixXd>& batch_inputs,
                       const Eigen::Ref<const Eigen::VectorXd>& batch_targets,
                       const Eigen::Ref<const Eigen::VectorXd>& coefficients,
                       double intercept, double lambda, const RegularizerConfig& reg) {
  const Eigen::Index rows = batch_inputs.rows();
  if (rows == 0) throw InvalidArgument("loss_and_grad: batch must be non-empty");
  if (batch_targets.size() != rows || batch_inputs.cols() != coefficients.size()) {
    throw InvalidArgument("loss_and_grad: inconsistent shapes");
  }

  Eigen::VectorXd residual = batch_inputs * coefficients;
  residual.array() += intercept;
  residual -= batch_targets;

  const double inv_rows = 1.0 / static_cast<double>(rows);
  LossGrad out;
  out.loss = residual.squaredNorm() * inv_rows;
  out.coefficient_grad.noalias() = (2.0 * inv_rows) * (batch_inputs.transpose() * residual);
  out.intercept_grad = 2.0 * inv_rows * residual.sum();
  if (lambda != 0.0 && reg.kind != RegularizerKind::None) {
    out.loss += lambda * regularizer_value(coefficients, reg);
    out.coefficient_grad += lambda * regularizer_grad(coefficients, reg);
  }
  return out;
}

double one_cycle_learning_rate(double base_lr, long step, long total_steps) {
  constexpr double kWarmupFraction = 0.3;
  constexpr double kDivFactor = 25.0;
  constexpr double kFinalDivFactor = 2500.0;
  const double lr_min = base_lr / kDivFactor;
  const double lr_final = base_lr / kFinalDivFactor;
  const long warmup = std::max(1L, static_cast<long>(kWarmupFraction * static_cast<double>(total_steps)));
  if (step < warmup) {
    return lr_min + (base_lr - lr_min) * static_cast<double>(step) / static_cast<double>(warmup);
  }
  const double progress =
      static_cast<double>(step - warmup) / std::max(1.0, static_cast<double>(total_steps - warmup));
  return lr_final + (base_lr - lr_final) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

namespace {

struct Standardization {
  double mean = 0.0;
  double std = 1.0;
};

// Mirrors regularizer_grad but accumulates lambda * dR into grad without
// allocating, for the per-batch update path.
void add_regularizer_grad(const Eigen::VectorXd& theta, double lambda,
                          const RegularizerConfig& reg, Eigen::VectorXd& grad) {
  if (lambda == 0.0 || reg.kind == RegularizerKind::None) return;
  const auto p = static_cast<double>(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double t = theta(i);
    if (t == 0.0) continue;
    const double x = std::abs(t);
    double slope = 0.0;
    if (reg.kind == RegularizerKind::SigmoidRoot) {
      const double root = std::pow(x, 1.0 / reg.c2);
      const double sig = 1.0 / (1.0 + std::exp(-reg.c1 * root));
      slope = 2.0 * sig * (1.0 - sig) * (reg.c1 / reg.c2) * std::pow(x, 1.0 / reg.c2 - 1.0) / p;
    } else {
      slope = 0.5 / (std::sqrt(x) * p);
    }
    slope = std::min(slope, kRegularizerGradCap);
    grad(i) += (t > 0.0) ? lambda * slope : -lambda * slope;
  }
}

}  // namespace

ARFit fit_sgd(const LaggedDataset& dataset, const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const int n = dataset.n_rows();
  const int p = dataset.order;
  if (p < 1 || dataset.inputs.cols() != p || dataset.inputs.rows() != n) {
    throw InvalidArgument("fit_sgd: malformed dataset");
  }
  if (n < config.batch_size) {
    throw InvalidArgument("fit_sgd: dataset has fewer rows than batch_size");
  }
  if (!dataset.inputs.allFinite() || !dataset.targets.allFinite()) {
    throw InvalidArgument("fit_sgd: dataset contains non-finite values");
  }

  Standardization stats;
  if (config.standardize) {
    stats.mean = dataset.targets.mean();
    const double var =
        (dataset.targets.array() - stats.mean).square().sum() / static_cast<double>(n);
    stats.std = std::sqrt(var);
    if (!(stats.std > 0.0)) {
      throw DegenerateInput("fit_sgd: constant targets cannot be standardized");
    }
  }
  const double inv_std = 1.0 / stats.std;

  const double lambda =
      config.regularizer.kind == RegularizerKind::None ? 0.0 : lambda_strength(config.regularizer);

  Rng rng(config.rng_seed);
  Eigen::VectorXd w(p);
  const double init_bound = 1.0 / std::sqrt(static_cast<double>(p));
  for (int i = 0; i < p; ++i) w(i) = rng.uniform(-init_bound, init_bound);
  double c = 0.0;

  Eigen::VectorXd velocity_w = Eigen::VectorXd::Zero(p);
  double velocity_c = 0.0;

  const int batch = config.batch_size;
  const long steps_per_epoch = (n + batch - 1) / batch;
  const long total_steps = steps_per_epoch * config.epochs;

  // Standardized row-major working copy; rows are shuffled in place each
  // epoch so mini-batches are contiguous blocks.
  using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajorMatrix inputs = ((dataset.inputs.array() - stats.mean) * inv_std).matrix();
  Eigen::VectorXd targets = ((dataset.targets.array() - stats.mean) * inv_std).matrix();

  Eigen::VectorXd residual(batch);
  Eigen::VectorXd grad_w(p);

  ARFit fit;
  fit.order = p;
  fit.fitter = Fitter::SGD;
  fit.trace.reserve(static_cast<std::size_t>(config.epochs));

  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
      if (j != i) {
        inputs.row(i).swap(inputs.row(j));
        std::swap(targets(i), targets(j));
      }
    }
    double epoch_sse = 0.0;
    for (int begin = 0; begin < n; begin += batch, ++step) {
      const int rows = std::min(batch, n - begin);
      auto X = inputs.middleRows(begin, rows);
      auto y = targets.segment(begin, rows);
      auto e = residual.head(rows);

      e.noalias() = X * w;
      e.array() += c;
      e -= y;
      const double inv_rows = 1.0 / static_cast<double>(rows);
      const double batch_mse = e.squaredNorm() * inv_rows;
      epoch_sse += batch_mse * rows;

      grad_w.noalias() = (2.0 * inv_rows) * (X.transpose() * e);
      add_regularizer_grad(w, lambda, config.regularizer, grad_w);
      const double grad_c = 2.0 * inv_rows * e.sum();

      const double lr = config.lr_schedule == LrSchedule::OneCycle
                            ? one_cycle_learning_rate(config.learning_rate, step, total_steps)
                            : config.learning_rate;
      velocity_w = config.momentum * velocity_w - lr * grad_w;
      w += velocity_w;
      velocity_c = config.momentum * velocity_c - lr * grad_c;
      c += velocity_c;

      if (!std::isfinite(batch_mse) || !w.allFinite() || !std::isfinite(c)) {
        std::ostringstream msg;
        msg << "fit_sgd: objective diverged at epoch " << epoch + 1 << " (learning rate " << lr
            << ")";
        throw Divergence(msg.str(), epoch + 1, lr);
      }
    }
    // report in original units
    fit.trace.push_back(epoch_sse / static_cast<double>(n) * stats.std * stats.std);
  }

  fit.coefficients.assign(w.data(), w.data() + p);
  // z = (y - m)/s turns the intercept back into c_orig = s*c + m*(1 - sum w)
  fit.intercept = stats.std * c + stats.mean * (1.0 - w.sum());

  Eigen::VectorXd full_residual = dataset.targets;
  full_residual.noalias() -= dataset.inputs * w;
  full_residual.array() -= fit.intercept;
  fit.train_loss = full_residual.squaredNorm() / static_cast<double>(n);

  const auto end = std::chrono::steady_clock::now();
  fit.wall_time_seconds = std::chrono::duration<double>(end - start).count();
  return fit;
}

double default_c_lambda(const TimeSeries& train_series, int pilot_order) {
  if (train_series.length() < 2) {
    throw InvalidArgument("default_c_lambda: series must have at least 2 values");
  }
  if (pilot_order < 1) throw InvalidArgument("default_c_lambda: pilot_order must be >= 1");
  const int order = std::min(pilot_order, train_series.length() - 1);

  TrainConfig pilot;
  pilot.epochs = 3;
  pilot.rng_seed = 0x9e3779b97f4a7c15ULL;
  pilot.regularizer.kind = RegularizerKind::None;

  const LaggedDataset ds = make_lagged_dataset(train_series, order);
  pilot.batch_size = std::min(pilot.batch_size, ds.n_rows());
  const ARFit fit = fit_sgd(ds, pilot);
  return std::sqrt(std::max(fit.train_loss, 0.0)) / 100.0;
}

}  // namespace arnet
