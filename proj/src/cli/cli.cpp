#include "exang/cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exang/errors.hpp"
#include "exang/inference/predict.hpp"
#include "exang/inference/waic.hpp"
#include "exang/io/config.hpp"
#include "exang/io/dataset_csv.hpp"
#include "exang/io/trace_io.hpp"
#include "exang/sampler/chain.hpp"
#include "exang/simulator/simulate.hpp"

namespace exang::cli {

namespace {

using nlohmann::json;

struct Paths {
  std::string config, data, out, truth, holdout, trace, grid, json_out;
};

void cmd_simulate(const Paths& p, std::ostream& out) {
  const RunConfig cfg = load_run_config(p.config);
  if (!cfg.simulation) throw ValidationError("config has no 'simulation' section");
  const SimulatedData sim = simulate_dataset(*cfg.simulation);
  write_dataset_csv(p.out, sim.data, cfg.data);
  if (!p.truth.empty()) {
    json truth = json::object();
    for (const auto& [name, v] : sim.truth_values) truth[name] = v;
    json holdout = json::array();
    const auto& h = sim.holdout;
    for (std::size_t q = 0; q < h.sites.size(); ++q) {
      const auto qi = static_cast<Eigen::Index>(q);
      holdout.push_back({{"site_id", h.sites[q].id},
                         {"lon", h.sites[q].covariates.lon},
                         {"lat", h.sites[q].covariates.lat},
                         {"mu", h.mu(qi)},
                         {"sigma", h.sigma(qi)},
                         {"xi", h.xi(qi)},
                         {"angular_mean", {h.angular_mean(qi, 0), h.angular_mean(qi, 1)}}});
    }
    write_json(p.truth, {{"config", scenario_name(cfg.simulation->scenario)},
                         {"parameters", truth},
                         {"holdout", holdout}});
  }
  if (!p.holdout.empty()) write_sites_csv(p.holdout, sim.holdout.sites);
  out << "wrote " << sim.data.k() << " sites x " << sim.data.n() << " years to " << p.out << '\n';
}

void cmd_fit(const Paths& p, std::ostream& out) {
  const RunConfig cfg = load_run_config(p.config);
  const Dataset data = read_dataset_csv(p.data, cfg.data);
  const FitResult fit = run_chain(data, cfg.spec, cfg.priors, cfg.mcmc.settings());
  write_trace_csv(p.out, fit.trace);
  write_json(p.out + ".manifest.json", make_manifest(cfg, fit, p.data));
  out << "retained " << fit.trace.rows() << " draws; trace written to " << p.out << '\n';
  for (const auto& a : fit.acceptance) {
    out << "chain " << a.chain << " acceptance:";
    for (const auto& [name, rate] : a.rates) out << ' ' << name << '=' << rate;
    out << '\n';
  }
}

void cmd_predict(const Paths& p, std::ostream& out) {
  const RunConfig cfg = load_run_config(p.config);
  const Dataset data = read_dataset_csv(p.data, cfg.data);
  const Trace trace = read_trace_csv(p.trace);
  const auto grid = read_sites_csv(p.grid, cfg.data.project, mean_origin(data.sites));
  Rng rng = make_stream(cfg.prediction.seed, 0);
  const auto draws = predict_sites(trace, data, cfg.spec, grid, rng);
  std::vector<SitePrediction> preds;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    preds.push_back(summarize_prediction(grid[q], draws[q], cfg.prediction.return_levels, cfg.data.meteorological));
  }
  write_predictions_csv(p.out, preds);
  if (!p.json_out.empty()) write_json(p.json_out, predictions_to_json(preds));
  out << "predicted " << preds.size() << " sites to " << p.out << '\n';
}

void cmd_waic(const Paths& p, std::ostream& out) {
  const RunConfig cfg = load_run_config(p.config);
  const Dataset data = read_dataset_csv(p.data, cfg.data);
  const Trace trace = read_trace_csv(p.trace);
  const json j = waic_to_json(waic(trace, data, cfg.spec));
  if (!p.out.empty()) write_json(p.out, j);
  out << j.dump(2) << '\n';
}

void cmd_summarize(const Paths& p, std::ostream& out) {
  const auto rows = summarize_trace(read_trace_csv(p.trace));
  if (p.out.empty()) {
    write_summary_csv(out, rows);
    return;
  }
  std::ofstream f(p.out);
  if (!f) throw ValidationError("cannot write '" + p.out + "'");
  write_summary_csv(f, rows);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian spatial model for extremes and their directions"};
  app.require_subcommand(1);
  Paths p;

  auto* sim = app.add_subcommand("simulate", "Simulate a dataset from a configuration's simulation section");
  sim->add_option("--config", p.config, "Run configuration (JSON)")->required();
  sim->add_option("--out", p.out, "Output station CSV")->required();
  sim->add_option("--truth", p.truth, "Ground-truth JSON output");
  sim->add_option("--holdout", p.holdout, "Held-out site CSV output");

  auto* fit = app.add_subcommand("fit", "Run the Gibbs sampler");
  fit->add_option("--data", p.data, "Station CSV")->required();
  fit->add_option("--config", p.config, "Run configuration (JSON)")->required();
  fit->add_option("--out", p.out, "Trace CSV output (manifest written alongside)")->required();

  auto* pred = app.add_subcommand("predict", "Posterior-predictive summaries at new sites");
  pred->add_option("--trace", p.trace, "Trace CSV")->required();
  pred->add_option("--config", p.config, "Run configuration (JSON)")->required();
  pred->add_option("--data", p.data, "Station CSV used for the fit")->required();
  pred->add_option("--grid", p.grid, "Query sites CSV (site_id,lon,lat,alt)")->required();
  pred->add_option("--out", p.out, "Prediction CSV output")->required();
  pred->add_option("--json", p.json_out, "Prediction JSON output");

  auto* wa = app.add_subcommand("waic", "WAIC of a fitted model");
  wa->add_option("--trace", p.trace, "Trace CSV")->required();
  wa->add_option("--config", p.config, "Run configuration (JSON)")->required();
  wa->add_option("--data", p.data, "Station CSV")->required();
  wa->add_option("--out", p.out, "WAIC JSON output");

  auto* sum = app.add_subcommand("summarize", "Posterior median and 95% interval per parameter");
  sum->add_option("--trace", p.trace, "Trace CSV")->required();
  sum->add_option("--out", p.out, "Summary CSV output (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*sim) cmd_simulate(p, out);
    if (*fit) cmd_fit(p, out);
    if (*pred) cmd_predict(p, out);
    if (*wa) cmd_waic(p, out);
    if (*sum) cmd_summarize(p, out);
  } catch (const SingularMatrixError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace exang::cli
