#include "exang/simulator/mse_study.hpp"

#include "exang/errors.hpp"
#include "exang/inference/predict.hpp"

namespace exang {

namespace {

bool is_site_column(const std::string& name) {
  return name.rfind("mu[", 0) == 0 || name.rfind("sigma[", 0) == 0 || name.rfind("xi[", 0) == 0;
}

double median_of(const Eigen::VectorXd& v) { return summarize_draws(v).median; }

}  // namespace

std::vector<MseCell> mse_study(const MseStudySettings& settings) {
  if (settings.replications < 1) throw ValidationError("mse_study needs at least one replication");
  std::vector<MseCell> out;
  for (std::size_t c = 0; c < settings.cells.size(); ++c) {
    MseCell cell;
    cell.k = settings.cells[c].first;
    cell.n = settings.cells[c].second;
    cell.replications = settings.replications;
    Rng seeder = make_stream(settings.seed, 1000 + c);
    for (int r = 0; r < settings.replications; ++r) {
      SimConfig cfg;
      cfg.scenario = settings.scenario;
      cfg.k = cell.k;
      cfg.n = cell.n;
      cfg.seed = seeder();
      const SimulatedData sim = simulate_dataset(cfg);

      ChainSettings mcmc = settings.mcmc;
      mcmc.seed = seeder();
      mcmc.initial_state.reset();
      if (settings.start_at_truth) mcmc.initial_state = sim.truth;
      const FitResult fit = run_chain(sim.data, sim.spec, simulation_priors(sim.spec), mcmc);
      const Trace& tr = fit.trace;

      for (const auto& [name, truth] : sim.truth_values) {
        if (is_site_column(name)) continue;
        const double err = median_of(tr.values(name)) - truth;
        cell.mse[name] += err * err / settings.replications;
      }
      const Eigen::VectorXd ratio =
          tr.values("tau_mu").array() / (1.0 + tr.values("lambda_mu").array());
      const double ratio_truth = sim.truth_values.at("tau_mu") / (1.0 + sim.truth_values.at("lambda_mu"));
      const double err = median_of(ratio) - ratio_truth;
      cell.mse[kSillRangeRatio] += err * err / settings.replications;
    }
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace exang
