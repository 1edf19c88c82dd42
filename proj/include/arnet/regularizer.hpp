#pragma once

#include <Eigen/Dense>
#include <string>

namespace arnet {

enum class RegularizerKind { None, SigmoidRoot, SqrtAlt };

std::string to_string(RegularizerKind kind);
RegularizerKind regularizer_kind_from_string(const std::string& name);

/// Sparsity penalty settings. sparsity_estimate is the user's estimate
/// s = (number of active lags) / (model order); c1 and c2 shape the
/// sigmoid-root curve and are calibrated for standardized data.
struct RegularizerConfig {
  RegularizerKind kind = RegularizerKind::None;
  double sparsity_estimate = 1.0;
  double c_lambda = 0.01;
  double c1 = 3.0;
  double c2 = 3.0;

  void validate() const;
};

/// The derivative of |theta|^(1/c2) is unbounded at zero; each component of
/// the penalty gradient is clamped to this magnitude so a weight sitting
/// near zero cannot blow up the update step.
inline constexpr double kRegularizerGradCap = 3.0;

/// lambda(s) = c_lambda * (1/s - 1); zero when s == 1.
double lambda_strength(const RegularizerConfig& reg);

/// SigmoidRoot: (1/p) * sum_i [ 2 / (1 + exp(-c1 * |theta_i|^(1/c2))) - 1 ]
/// SqrtAlt:    (1/p) * sum_i sqrt(|theta_i|)
/// None:       0
double regularizer_value(const Eigen::Ref<const Eigen::VectorXd>& theta,
                         const RegularizerConfig& reg);

/// Element-wise derivative of regularizer_value. Takes the 0 subgradient at
/// theta_i == 0 and clamps each component to kRegularizerGradCap.
Eigen::VectorXd regularizer_grad(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                 const RegularizerConfig& reg);

}  // namespace arnet
