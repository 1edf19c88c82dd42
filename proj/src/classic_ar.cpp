#include "arnet/classic_ar.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "arnet/errors.hpp"

namespace arnet {

std::string to_string(Fitter fitter) {
  return fitter == Fitter::LeastSquares ? "least_squares" : "sgd";
}

Fitter fitter_from_string(const std::string& name) {
  if (name == "least_squares" || name == "classic" || name == "classic_ar") {
    return Fitter::LeastSquares;
  }
  if (name == "sgd" || name == "ar_net" || name == "arnet") return Fitter::SGD;
  throw InvalidArgument("unknown fitter '" + name + "' (expected classic or sgd)");
}

ARFit fit_least_squares(const LaggedDataset& dataset, bool include_intercept) {
  const auto start = std::chrono::steady_clock::now();
  const int n = dataset.n_rows();
  const int p = dataset.order;
  if (p < 1 || dataset.inputs.cols() != p || dataset.inputs.rows() != n) {
    throw InvalidArgument("fit_least_squares: malformed dataset");
  }
  if (n < p + 1) {
    throw InvalidArgument("fit_least_squares: need at least p + 1 rows for an overdetermined fit");
  }

  const Eigen::MatrixXd& X = dataset.inputs;
  const Eigen::VectorXd& y = dataset.targets;
  const int cols = include_intercept ? p + 1 : p;

  // Normal system assembled blockwise; the intercept column is appended last.
  Eigen::MatrixXd gxx = Eigen::MatrixXd::Zero(p, p);
  gxx.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  Eigen::MatrixXd gram(cols, cols);
  gram.topLeftCorner(p, p) = gxx.selfadjointView<Eigen::Lower>();
  Eigen::VectorXd rhs(cols);
  rhs.head(p).noalias() = X.transpose() * y;
  if (include_intercept) {
    gram.col(p).head(p) = X.colwise().sum().transpose();
    gram.row(p).head(p) = gram.col(p).head(p).transpose();
    gram(p, p) = static_cast<double>(n);
    rhs(p) = y.sum();
  }
  if (!gram.allFinite() || !rhs.allFinite()) {
    // any non-finite dataset entry propagates into the normal system
    throw InvalidArgument("fit_least_squares: dataset contains non-finite values");
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double d_max = d.maxCoeff();
  const double d_min = d.minCoeff();
  // gram ~ X^T X, so its condition number is roughly cond(X)^2
  const double cond =
      (d_min > 0.0) ? std::sqrt(d_max / d_min) : std::numeric_limits<double>::infinity();
  if (ldlt.info() != Eigen::Success || !(d_min > d_max * 1e-12)) {
    std::ostringstream msg;
    msg << "fit_least_squares: design is rank deficient or near singular "
        << "(condition estimate " << cond << ")";
    throw SingularSystem(msg.str(), cond);
  }

  const Eigen::VectorXd solution = ldlt.solve(rhs);

  ARFit fit;
  fit.order = p;
  fit.fitter = Fitter::LeastSquares;
  fit.coefficients.assign(solution.data(), solution.data() + p);
  fit.intercept = include_intercept ? solution(p) : 0.0;

  // SSR = y'y - 2 b'rhs + b'Gb; avoids another O(n*p) residual pass
  const double ssr =
      y.squaredNorm() - 2.0 * solution.dot(rhs) + solution.dot(gram.selfadjointView<Eigen::Lower>() * solution);
  fit.train_loss = std::max(ssr, 0.0) / static_cast<double>(n);

  const auto end = std::chrono::steady_clock::now();
  fit.wall_time_seconds = std::chrono::duration<double>(end - start).count();
  return fit;
}

double predict_one_step(const ARFit& fit, std::span<const double> lags) {
  if (static_cast<int>(lags.size()) != fit.order) {
    throw InvalidArgument("predict_one_step: lag vector length does not match fit order");
  }
  return ar_one_step(fit.coefficients, fit.intercept, lags);
}

}  // namespace arnet
