#include "arnet/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "arnet/errors.hpp"

namespace arnet {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

double parse_double(const std::string& text, const std::filesystem::path& path, int line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error("bad number '" + text + "' at " + path.string() + ":" + std::to_string(line));
  }
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

json process_spec_to_json(const ARProcessSpec& spec) {
  return json{{"coefficients", spec.coefficients},
              {"intercept", spec.intercept},
              {"noise_std", spec.noise_std},
              {"order", spec.order()}};
}

ARProcessSpec process_spec_from_json(const json& j) {
  ARProcessSpec spec;
  spec.coefficients = j.at("coefficients").get<std::vector<double>>();
  spec.intercept = j.value("intercept", 0.0);
  spec.noise_std = j.value("noise_std", 1.0);
  spec.validate();
  return spec;
}

void dump_json(const std::filesystem::path& path, const json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

json load_json(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw Error("cannot parse '" + path.string() + "': " + err.what());
  }
  return j;
}

}  // namespace

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  auto out = open_for_write(path);
  out << "value\n";
  for (double v : series.values) out << format_double(v) << '\n';
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "value") {
    throw Error("series CSV '" + path.string() + "' must start with header 'value'");
  }
  TimeSeries series;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    series.values.push_back(parse_double(line, path, line_no));
  }
  if (series.values.empty()) throw Error("series CSV '" + path.string() + "' has no rows");
  return series;
}

void write_provenance_json(const std::filesystem::path& path, const TimeSeries& series) {
  json j;
  if (series.source_spec) j["spec"] = process_spec_to_json(*series.source_spec);
  if (series.seed) j["seed"] = *series.seed;
  if (series.burn_in) j["burn_in"] = *series.burn_in;
  if (!series.warnings.empty()) j["warnings"] = series.warnings;
  j["length"] = series.length();
  dump_json(path, j);
}

TimeSeries read_provenance_json(const std::filesystem::path& path, TimeSeries series) {
  const json j = load_json(path);
  if (j.contains("spec")) series.source_spec = process_spec_from_json(j.at("spec"));
  if (j.contains("seed")) series.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("burn_in")) series.burn_in = j.at("burn_in").get<int>();
  if (j.contains("warnings")) series.warnings = j.at("warnings").get<std::vector<std::string>>();
  return series;
}

json fit_to_json(const ARFit& fit) {
  json j{{"order", fit.order},
         {"intercept", fit.intercept},
         {"coefficients", fit.coefficients},
         {"fitter", to_string(fit.fitter)},
         {"train_loss", fit.train_loss},
         {"wall_time_seconds", fit.wall_time_seconds}};
  if (!fit.trace.empty()) j["trace"] = fit.trace;
  return j;
}

ARFit fit_from_json(const json& j) {
  ARFit fit;
  fit.order = j.at("order").get<int>();
  fit.intercept = j.at("intercept").get<double>();
  fit.coefficients = j.at("coefficients").get<std::vector<double>>();
  fit.fitter = fitter_from_string(j.at("fitter").get<std::string>());
  fit.train_loss = j.value("train_loss", 0.0);
  fit.wall_time_seconds = j.value("wall_time_seconds", 0.0);
  if (j.contains("trace")) fit.trace = j.at("trace").get<std::vector<double>>();
  if (fit.order != static_cast<int>(fit.coefficients.size())) {
    throw Error("fit JSON: order does not match coefficients length");
  }
  return fit;
}

void write_fit_json(const std::filesystem::path& path, const ARFit& fit) {
  dump_json(path, fit_to_json(fit));
}

ARFit read_fit_json(const std::filesystem::path& path) { return fit_from_json(load_json(path)); }

json train_config_to_json(const TrainConfig& config) {
  return json{{"epochs", config.epochs},
              {"batch_size", config.batch_size},
              {"learning_rate", config.learning_rate},
              {"momentum", config.momentum},
              {"lr_schedule", to_string(config.lr_schedule)},
              {"rng_seed", config.rng_seed},
              {"standardize", config.standardize},
              {"regularizer",
               {{"kind", to_string(config.regularizer.kind)},
                {"sparsity_estimate", config.regularizer.sparsity_estimate},
                {"c_lambda", config.regularizer.c_lambda},
                {"c1", config.regularizer.c1},
                {"c2", config.regularizer.c2}}}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig config;
  config.epochs = j.value("epochs", config.epochs);
  config.batch_size = j.value("batch_size", config.batch_size);
  config.learning_rate = j.value("learning_rate", config.learning_rate);
  config.momentum = j.value("momentum", config.momentum);
  if (j.contains("lr_schedule")) {
    config.lr_schedule = lr_schedule_from_string(j.at("lr_schedule").get<std::string>());
  }
  config.rng_seed = j.value("rng_seed", config.rng_seed);
  config.standardize = j.value("standardize", config.standardize);
  if (j.contains("regularizer")) {
    const json& r = j.at("regularizer");
    if (r.contains("kind")) {
      config.regularizer.kind = regularizer_kind_from_string(r.at("kind").get<std::string>());
    }
    config.regularizer.sparsity_estimate =
        r.value("sparsity_estimate", config.regularizer.sparsity_estimate);
    config.regularizer.c_lambda = r.value("c_lambda", config.regularizer.c_lambda);
    config.regularizer.c1 = r.value("c1", config.regularizer.c1);
    config.regularizer.c2 = r.value("c2", config.regularizer.c2);
  }
  config.validate();
  return config;
}

json report_to_json(const EvaluationReport& report) {
  json j;
  if (report.stpe) {
    j["stpe"] = *report.stpe;
  } else {
    j["stpe"] = nullptr;
  }
  j["test_mse"] = report.test_mse;
  j["recovered_support"] = report.recovered_support;
  j["residual_summary"] = {{"mean", report.residual_summary.mean},
                           {"std", report.residual_summary.std},
                           {"min", report.residual_summary.min},
                           {"max", report.residual_summary.max}};
  return j;
}

json experiment_spec_to_json(const ExperimentSpec& spec) {
  json j{{"name", to_string(spec.name)},
         {"p_values", spec.p_values},
         {"n_train", spec.n_train},
         {"n_test", spec.n_test},
         {"repeats", spec.repeats},
         {"noise_std", spec.noise_std},
         {"base_seed", spec.base_seed},
         {"coefficient_abs_sum", spec.coefficient_abs_sum},
         {"auto_c_lambda", spec.auto_c_lambda},
         {"train_config", train_config_to_json(spec.train_config)}};
  json fitters = json::array();
  for (Fitter f : spec.fitters) fitters.push_back(to_string(f));
  j["fitters"] = fitters;
  if (spec.true_process) j["true_process"] = process_spec_to_json(*spec.true_process);
  if (spec.sparsity_override) j["sparsity_override"] = *spec.sparsity_override;
  return j;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  auto out = open_for_write(path);
  out << "experiment,p_model,p_true,sparsity,seed,fitter,stpe,test_mse,wall_time_seconds\n";
  for (const auto& rec : records) {
    out << rec.experiment << ',' << rec.p_model << ',' << rec.p_true << ','
        << format_double(rec.sparsity) << ',' << rec.seed << ',' << to_string(rec.fitter) << ','
        << format_double(rec.stpe) << ',' << format_double(rec.test_mse) << ','
        << format_double(rec.wall_time_seconds) << '\n';
  }
}

void write_coefficients_csv(const std::filesystem::path& path,
                            const std::vector<LagCoefficientRecord>& records) {
  auto out = open_for_write(path);
  out << "lag,true_w,fitted_w,fitter,seed\n";
  for (const auto& rec : records) {
    out << rec.lag << ',' << format_double(rec.true_w) << ',' << format_double(rec.fitted_w)
        << ',' << to_string(rec.fitter) << ',' << rec.seed << '\n';
  }
}

void write_manifest_json(const std::filesystem::path& path, const ExperimentResult& result) {
  json j{{"spec", experiment_spec_to_json(result.spec)},
         {"record_count", result.records.size()}};
  json failures = json::array();
  for (const auto& rec : result.records) {
    if (!rec.failed) continue;
    failures.push_back({{"p_model", rec.p_model},
                        {"seed", rec.seed},
                        {"fitter", to_string(rec.fitter)},
                        {"error", rec.error}});
  }
  j["failures"] = failures;
  dump_json(path, j);
}

void write_residuals_csv(const std::filesystem::path& path,
                         const std::vector<PredictionRecord>& predictions) {
  auto out = open_for_write(path);
  out << "index,actual,predicted,residual\n";
  for (const auto& rec : predictions) {
    out << rec.index << ',' << format_double(rec.actual) << ',' << format_double(rec.predicted)
        << ',' << format_double(rec.residual) << '\n';
  }
}

}  // namespace arnet
