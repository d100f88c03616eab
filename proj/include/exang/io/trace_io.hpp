#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "exang/inference/predict.hpp"
#include "exang/inference/waic.hpp"
#include "exang/io/config.hpp"
#include "exang/sampler/chain.hpp"

namespace exang {

/// Trace CSV: header chain,iteration,<column names>; one row per retained
/// iteration; values written with 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::string& path);

/// Sidecar manifest: canonical config, its digest, seed, chain count and the
/// post burn-in acceptance rates of every chain.
nlohmann::json make_manifest(const RunConfig& cfg, const FitResult& fit, const std::string& data_path);
void write_json(const std::string& path, const nlohmann::json& j);

nlohmann::json waic_to_json(const WaicReport& r);

struct SitePrediction {
  Site site;
  PosteriorSummary mu, sigma, xi;
  std::vector<std::pair<double, PosteriorSummary>> return_levels;
  bool has_angle = false;
  double angle_mode_deg = 0.0;        // input convention
  double angle_dispersion_deg = 0.0;  // circular standard deviation
  int n_modes = 0;
};

SitePrediction summarize_prediction(const Site& site, const PredictionDraws& draws,
                                    const std::vector<double>& return_levels, bool meteorological);

/// Columns site_id, lon, lat, alt, mu_med, mu_lo, mu_hi, sigma_*, xi_*,
/// rl_<p>_med/lo/hi per return level, angle_mode, angle_dispersion, n_modes.
void write_predictions_csv(const std::string& path, const std::vector<SitePrediction>& preds);
nlohmann::json predictions_to_json(const std::vector<SitePrediction>& preds);

/// Posterior median and equal-tailed 95% interval per trace column.
struct ColumnSummary {
  std::string name;
  PosteriorSummary summary;
};
std::vector<ColumnSummary> summarize_trace(const Trace& trace);
void write_summary_csv(std::ostream& out, const std::vector<ColumnSummary>& rows);

}  // namespace exang
