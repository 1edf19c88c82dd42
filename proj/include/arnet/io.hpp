#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "arnet/classic_ar.hpp"
#include "arnet/experiments.hpp"
#include "arnet/metrics.hpp"
#include "arnet/sgd.hpp"
#include "arnet/timeseries.hpp"

namespace arnet {

/// Single-column CSV with header `value`; UTF-8, LF line endings, `.` decimal
/// separator, round-trippable doubles.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::filesystem::path& path);

/// JSON sidecar carrying generation provenance (spec, seed, burn_in).
void write_provenance_json(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_provenance_json(const std::filesystem::path& path, TimeSeries series);

nlohmann::json fit_to_json(const ARFit& fit);
ARFit fit_from_json(const nlohmann::json& j);
void write_fit_json(const std::filesystem::path& path, const ARFit& fit);
ARFit read_fit_json(const std::filesystem::path& path);

nlohmann::json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const EvaluationReport& report);

nlohmann::json experiment_spec_to_json(const ExperimentSpec& spec);

/// `experiment,p_model,p_true,sparsity,seed,fitter,stpe,test_mse,wall_time_seconds`.
/// Failed records carry nan metrics.
void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// `lag,true_w,fitted_w,fitter,seed` for weight-profile plots.
void write_coefficients_csv(const std::filesystem::path& path,
                            const std::vector<LagCoefficientRecord>& records);

/// Echoes the full experiment spec plus a summary of any failed records.
void write_manifest_json(const std::filesystem::path& path, const ExperimentResult& result);

/// `index,actual,predicted,residual`.
void write_residuals_csv(const std::filesystem::path& path,
                         const std::vector<PredictionRecord>& predictions);

}  // namespace arnet
