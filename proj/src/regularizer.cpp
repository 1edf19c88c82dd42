#include "arnet/regularizer.hpp"

#include <algorithm>
#include <cmath>

#include "arnet/errors.hpp"

namespace arnet {

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::None: return "none";
    case RegularizerKind::SigmoidRoot: return "sigmoid_root";
    case RegularizerKind::SqrtAlt: return "sqrt_alt";
  }
  return "none";
}

RegularizerKind regularizer_kind_from_string(const std::string& name) {
  if (name == "none") return RegularizerKind::None;
  if (name == "sigmoid_root" || name == "sigmoid-root") return RegularizerKind::SigmoidRoot;
  if (name == "sqrt_alt" || name == "sqrt-alt") return RegularizerKind::SqrtAlt;
  throw InvalidArgument("unknown regularizer '" + name + "'");
}

void RegularizerConfig::validate() const {
  if (!(sparsity_estimate > 0.0) || sparsity_estimate > 1.0) {
    throw InvalidArgument("RegularizerConfig: sparsity_estimate must be in (0, 1]");
  }
  if (!(c_lambda >= 0.0)) throw InvalidArgument("RegularizerConfig: c_lambda must be >= 0");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidArgument("RegularizerConfig: c1 and c2 must be > 0");
}

double lambda_strength(const RegularizerConfig& reg) {
  reg.validate();
  return reg.c_lambda * (1.0 / reg.sparsity_estimate - 1.0);
}

double regularizer_value(const Eigen::Ref<const Eigen::VectorXd>& theta,
                         const RegularizerConfig& reg) {
  if (theta.size() == 0) throw InvalidArgument("regularizer_value: theta must be non-empty");
  const auto p = static_cast<double>(theta.size());
  switch (reg.kind) {
    case RegularizerKind::None:
      return 0.0;
    case RegularizerKind::SigmoidRoot: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double root = std::pow(std::abs(theta(i)), 1.0 / reg.c2);
        sum += 2.0 / (1.0 + std::exp(-reg.c1 * root)) - 1.0;
      }
      return sum / p;
    }
    case RegularizerKind::SqrtAlt: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < theta.size(); ++i) sum += std::sqrt(std::abs(theta(i)));
      return sum / p;
    }
  }
  return 0.0;
}

Eigen::VectorXd regularizer_grad(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                 const RegularizerConfig& reg) {
  if (theta.size() == 0) throw InvalidArgument("regularizer_grad: theta must be non-empty");
  const auto p = static_cast<double>(theta.size());
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  if (reg.kind == RegularizerKind::None) return grad;

  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double t = theta(i);
    if (t == 0.0) continue;  // subgradient choice at the kink
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
    grad(i) = (t > 0.0) ? slope : -slope;
  }
  return grad;
}

}  // namespace arnet
