#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arnet/classic_ar.hpp"
#include "arnet/errors.hpp"
#include "arnet/experiments.hpp"
#include "arnet/metrics.hpp"
#include "arnet/regularizer.hpp"
#include "arnet/sgd.hpp"
#include "arnet/timeseries.hpp"

namespace py = pybind11;
using namespace arnet;

PYBIND11_MODULE(_arnet, m) {
  m.doc() = "Auto-regressive time-series fitting: least squares and sparse-regularized SGD";

  py::register_exception<InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
  py::register_exception<DegenerateInput>(m, "DegenerateInputError", PyExc_ValueError);
  py::register_exception<UndefinedMetric>(m, "UndefinedMetricError", PyExc_ValueError);
  py::register_exception<InsufficientData>(m, "InsufficientDataError", PyExc_ValueError);
  py::register_exception<SingularSystem>(m, "SingularSystemError", PyExc_ArithmeticError);
  py::register_exception<Divergence>(m, "DivergenceError", PyExc_ArithmeticError);

  py::enum_<Fitter>(m, "Fitter")
      .value("LeastSquares", Fitter::LeastSquares)
      .value("SGD", Fitter::SGD);
  py::enum_<RegularizerKind>(m, "RegularizerKind")
      .value("NoRegularizer", RegularizerKind::None)
      .value("SigmoidRoot", RegularizerKind::SigmoidRoot)
      .value("SqrtAlt", RegularizerKind::SqrtAlt);
  py::enum_<LrSchedule>(m, "LrSchedule")
      .value("Constant", LrSchedule::Constant)
      .value("OneCycle", LrSchedule::OneCycle);
  py::enum_<ExperimentKind>(m, "ExperimentKind")
      .value("DenseSweep", ExperimentKind::DenseSweep)
      .value("SparseSweep", ExperimentKind::SparseSweep)
      .value("SmallData", ExperimentKind::SmallData)
      .value("Timing", ExperimentKind::Timing);

  py::class_<ARProcessSpec>(m, "ARProcessSpec")
      .def(py::init<>())
      .def(py::init([](std::vector<double> coefficients, double intercept, double noise_std) {
             ARProcessSpec spec{std::move(coefficients), intercept, noise_std};
             spec.validate();
             return spec;
           }),
           py::arg("coefficients"), py::arg("intercept") = 0.0, py::arg("noise_std") = 1.0)
      .def_readwrite("coefficients", &ARProcessSpec::coefficients)
      .def_readwrite("intercept", &ARProcessSpec::intercept)
      .def_readwrite("noise_std", &ARProcessSpec::noise_std)
      .def_property_readonly("order", &ARProcessSpec::order)
      .def("stable", &ARProcessSpec::stable)
      .def("__repr__", [](const ARProcessSpec& s) {
        return "ARProcessSpec(order=" + std::to_string(s.order()) +
               ", noise_std=" + std::to_string(s.noise_std) + ")";
      });

  py::class_<TimeSeries>(m, "TimeSeries")
      .def(py::init<>())
      .def(py::init([](std::vector<double> values) {
             TimeSeries series;
             series.values = std::move(values);
             return series;
           }),
           py::arg("values"))
      .def_readwrite("values", &TimeSeries::values)
      .def_readonly("seed", &TimeSeries::seed)
      .def_readonly("source_spec", &TimeSeries::source_spec)
      .def_readonly("burn_in", &TimeSeries::burn_in)
      .def_readonly("warnings", &TimeSeries::warnings)
      .def("__len__", &TimeSeries::length)
      .def("mean", &TimeSeries::mean)
      .def("std_dev", &TimeSeries::std_dev);

  py::class_<LaggedDataset>(m, "LaggedDataset")
      .def_readonly("inputs", &LaggedDataset::inputs)
      .def_readonly("targets", &LaggedDataset::targets)
      .def_readonly("order", &LaggedDataset::order)
      .def_property_readonly("n_rows", &LaggedDataset::n_rows);

  py::class_<NormalizationStats>(m, "NormalizationStats")
      .def_readonly("mean", &NormalizationStats::mean)
      .def_readonly("std", &NormalizationStats::std)
      .def("normalize", &NormalizationStats::normalize)
      .def("denormalize", &NormalizationStats::denormalize);

  py::class_<ARFit>(m, "ARFit")
      .def_readonly("coefficients", &ARFit::coefficients)
      .def_readonly("intercept", &ARFit::intercept)
      .def_readonly("order", &ARFit::order)
      .def_readonly("fitter", &ARFit::fitter)
      .def_readonly("train_loss", &ARFit::train_loss)
      .def_readonly("wall_time_seconds", &ARFit::wall_time_seconds)
      .def_readonly("trace", &ARFit::trace);

  py::class_<RegularizerConfig>(m, "RegularizerConfig")
      .def(py::init<>())
      .def_readwrite("kind", &RegularizerConfig::kind)
      .def_readwrite("sparsity_estimate", &RegularizerConfig::sparsity_estimate)
      .def_readwrite("c_lambda", &RegularizerConfig::c_lambda)
      .def_readwrite("c1", &RegularizerConfig::c1)
      .def_readwrite("c2", &RegularizerConfig::c2);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("momentum", &TrainConfig::momentum)
      .def_readwrite("lr_schedule", &TrainConfig::lr_schedule)
      .def_readwrite("rng_seed", &TrainConfig::rng_seed)
      .def_readwrite("regularizer", &TrainConfig::regularizer)
      .def_readwrite("standardize", &TrainConfig::standardize);

  py::class_<ResidualSummary>(m, "ResidualSummary")
      .def_readonly("mean", &ResidualSummary::mean)
      .def_readonly("std", &ResidualSummary::std)
      .def_readonly("min", &ResidualSummary::min)
      .def_readonly("max", &ResidualSummary::max);

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def_readonly("stpe", &EvaluationReport::stpe)
      .def_readonly("test_mse", &EvaluationReport::test_mse)
      .def_readonly("recovered_support", &EvaluationReport::recovered_support)
      .def_readonly("residual_summary", &EvaluationReport::residual_summary);

  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("name", &ExperimentSpec::name)
      .def_readwrite("p_values", &ExperimentSpec::p_values)
      .def_readwrite("n_train", &ExperimentSpec::n_train)
      .def_readwrite("n_test", &ExperimentSpec::n_test)
      .def_readwrite("repeats", &ExperimentSpec::repeats)
      .def_readwrite("noise_std", &ExperimentSpec::noise_std)
      .def_readwrite("true_process", &ExperimentSpec::true_process)
      .def_readwrite("fitters", &ExperimentSpec::fitters)
      .def_readwrite("train_config", &ExperimentSpec::train_config)
      .def_readwrite("base_seed", &ExperimentSpec::base_seed)
      .def_readwrite("coefficient_abs_sum", &ExperimentSpec::coefficient_abs_sum)
      .def_readwrite("auto_c_lambda", &ExperimentSpec::auto_c_lambda)
      .def_readwrite("sparsity_override", &ExperimentSpec::sparsity_override);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("experiment", &RunRecord::experiment)
      .def_readonly("p_model", &RunRecord::p_model)
      .def_readonly("p_true", &RunRecord::p_true)
      .def_readonly("sparsity", &RunRecord::sparsity)
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("fitter", &RunRecord::fitter)
      .def_readonly("stpe", &RunRecord::stpe)
      .def_readonly("test_mse", &RunRecord::test_mse)
      .def_readonly("wall_time_seconds", &RunRecord::wall_time_seconds)
      .def_readonly("failed", &RunRecord::failed)
      .def_readonly("error", &RunRecord::error);

  py::class_<LagCoefficientRecord>(m, "LagCoefficientRecord")
      .def_readonly("lag", &LagCoefficientRecord::lag)
      .def_readonly("true_w", &LagCoefficientRecord::true_w)
      .def_readonly("fitted_w", &LagCoefficientRecord::fitted_w)
      .def_readonly("fitter", &LagCoefficientRecord::fitter)
      .def_readonly("seed", &LagCoefficientRecord::seed);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("spec", &ExperimentResult::spec)
      .def_readonly("records", &ExperimentResult::records)
      .def_readonly("coefficients", &ExperimentResult::coefficients);

  m.def("sample_coefficients", &sample_coefficients, py::arg("p"), py::arg("target_abs_sum"),
        py::arg("rng_seed"));
  m.def("default_burn_in", &default_burn_in, py::arg("order"));
  m.def("generate_ar_series", &generate_ar_series, py::arg("spec"), py::arg("n"),
        py::arg("burn_in"), py::arg("rng_seed"), py::arg("pre_history") = py::none());
  m.def("split_series", &split_series, py::arg("series"), py::arg("n_train"));
  m.def("standardize", &standardize, py::arg("series"));
  m.def("destandardize", &destandardize, py::arg("series"), py::arg("stats"));
  m.def("make_lagged_dataset", &make_lagged_dataset, py::arg("series"), py::arg("p"));

  m.def("fit_least_squares", &fit_least_squares, py::arg("dataset"),
        py::arg("include_intercept") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "predict_one_step",
      [](const ARFit& fit, const std::vector<double>& lags) { return predict_one_step(fit, lags); },
      py::arg("fit"), py::arg("lags"));

  m.def("lambda_strength", &lambda_strength, py::arg("reg"));
  m.def("regularizer_value", &regularizer_value, py::arg("theta"), py::arg("reg"));
  m.def("regularizer_grad", &regularizer_grad, py::arg("theta"), py::arg("reg"));
  m.def(
      "loss_and_grad",
      [](const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
         const Eigen::VectorXd& coefficients, double intercept, double lambda,
         const RegularizerConfig& reg) {
        const LossGrad lg = loss_and_grad(inputs, targets, coefficients, intercept, lambda, reg);
        return py::make_tuple(lg.loss, lg.coefficient_grad, lg.intercept_grad);
      },
      py::arg("batch_inputs"), py::arg("batch_targets"), py::arg("coefficients"),
      py::arg("intercept"), py::arg("lambda_"), py::arg("reg"));
  m.def("one_cycle_learning_rate", &one_cycle_learning_rate, py::arg("base_lr"), py::arg("step"),
        py::arg("total_steps"));
  m.def("fit_sgd", &fit_sgd, py::arg("dataset"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("default_c_lambda", &default_c_lambda, py::arg("train_series"), py::arg("pilot_order") = 10,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "stpe",
      [](const std::vector<double>& estimated, const std::vector<double>& truth) {
        return stpe(estimated, truth);
      },
      py::arg("estimated"), py::arg("truth"));
  m.def("forecast_mse", &forecast_mse, py::arg("fit"), py::arg("test"), py::arg("context"));
  m.def("one_step_predictions",
        [](const ARFit& fit, const TimeSeries& test, const TimeSeries& context) {
          py::list out;
          for (const auto& rec : one_step_predictions(fit, test, context)) {
            out.append(py::make_tuple(rec.index, rec.actual, rec.predicted, rec.residual));
          }
          return out;
        },
        py::arg("fit"), py::arg("test"), py::arg("context"));
  m.def("recovered_support", &recovered_support, py::arg("fit"),
        py::arg("threshold") = kSupportThreshold);
  m.def("evaluate_forecast", &evaluate_forecast, py::arg("fit"), py::arg("test"),
        py::arg("context"), py::arg("true_coefficients") = py::none(),
        py::arg("support_threshold") = kSupportThreshold);

  m.def("small_data_process", &small_data_process, py::arg("noise_std") = 1.0);
  m.def("run_experiment", &run_experiment, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());
  m.def("estimate_scaling_exponent", &estimate_scaling_exponent, py::arg("records"),
        py::arg("fitter"));

  m.attr("SUPPORT_THRESHOLD") = kSupportThreshold;
  m.attr("__version__") = "0.1.0";
}
