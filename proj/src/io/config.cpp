#include "exang/io/config.hpp"

#include <fstream>
#include <set>

#include <openssl/evp.h>

#include "exang/errors.hpp"

namespace exang {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("invalid value for '") + key + "'");
  }
}

Formula formula_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + " must be an array of terms");
  Formula f;
  for (const auto& t : j) f.push_back(term_from_json(t));
  return f;
}

json formula_to_json(const Formula& f) {
  json a = json::array();
  for (const auto& t : f) a.push_back(term_to_json(t));
  return a;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(where + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

void gaussian_from_json(const json& j, const std::string& where, GaussianPrior& p) {
  check_keys(j, where, {"mean", "cov", "variance"});
  const auto dim = p.mean.size();
  if (j.contains("mean")) {
    p.mean = vector_from_json(j["mean"], where + ".mean");
    if (p.mean.size() != dim) throw ValidationError(where + ".mean has wrong length");
  }
  if (j.contains("variance")) {
    const double v = get_or<double>(j, "variance", 0.0);
    p.cov = v * Eigen::MatrixXd::Identity(dim, dim);
  }
  if (j.contains("cov")) {
    const auto& c = j["cov"];
    if (!c.is_array() || static_cast<Eigen::Index>(c.size()) != dim) {
      throw ValidationError(where + ".cov must be a square matrix matching the formula");
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto row = vector_from_json(c[static_cast<std::size_t>(r)], where + ".cov");
      if (row.size() != dim) throw ValidationError(where + ".cov must be square");
      p.cov.row(r) = row.transpose();
    }
  }
}

json gaussian_to_json(const GaussianPrior& p) {
  json mean = json::array();
  for (Eigen::Index i = 0; i < p.mean.size(); ++i) mean.push_back(p.mean(i));
  json cov = json::array();
  for (Eigen::Index r = 0; r < p.cov.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < p.cov.cols(); ++c) row.push_back(p.cov(r, c));
    cov.push_back(row);
  }
  return {{"mean", mean}, {"cov", cov}};
}

template <typename P>
void shape_scale_from_json(const json& j, const std::string& where, P& p) {
  check_keys(j, where, {"shape", "scale"});
  p.shape = get_or<double>(j, "shape", p.shape);
  p.scale = get_or<double>(j, "scale", p.scale);
}

template <typename P>
json shape_scale_to_json(const P& p) {
  return {{"shape", p.shape}, {"scale", p.scale}};
}

LayerCovariance layer_cov_from_json(const json& j, const std::string& where) {
  check_keys(j, where, {"shape", "sample_shape"});
  LayerCovariance c;
  c.shape = get_or<double>(j, "shape", 1.0);
  c.sample_shape = get_or<bool>(j, "sample_shape", false);
  return c;
}

json layer_cov_to_json(const LayerCovariance& c) { return {{"shape", c.shape}, {"sample_shape", c.sample_shape}}; }

}  // namespace

json term_to_json(const Term& t) {
  if (t.kind == TermKind::Quantile) return json{{"q", t.prob}};
  return t.name();
}

Term term_from_json(const json& j) {
  if (j.is_string()) return Term::from_name(j.get<std::string>());
  if (j.is_object() && j.size() == 1 && j.contains("q") && j["q"].is_number()) {
    return Term::quantile(j["q"].get<double>());
  }
  throw ValidationError("unknown formula term '" + j.dump() + "'");
}

ChainSettings McmcConfig::settings() const {
  ChainSettings s;
  s.n_iter = n_iter;
  s.burnin = burnin;
  s.thin = thin;
  s.seed = seed;
  s.n_chains = n_chains;
  return s;
}

RunConfig parse_run_config(const json& j) {
  check_keys(j, "config", {"model", "priors", "mcmc", "data", "prediction", "simulation"});
  RunConfig cfg;
  if (j.contains("model")) {
    const auto& m = j["model"];
    check_keys(m, "model", {"mu", "sigma", "xi", "theta1", "theta2", "covariance"});
    if (m.contains("mu")) cfg.spec.mu = formula_from_json(m["mu"], "model.mu");
    if (m.contains("sigma")) cfg.spec.sigma = formula_from_json(m["sigma"], "model.sigma");
    if (m.contains("xi")) cfg.spec.xi = formula_from_json(m["xi"], "model.xi");
    if (m.contains("theta1")) cfg.spec.theta1 = formula_from_json(m["theta1"], "model.theta1");
    if (m.contains("theta2")) cfg.spec.theta2 = formula_from_json(m["theta2"], "model.theta2");
    if (m.contains("covariance")) {
      const auto& c = m["covariance"];
      check_keys(c, "model.covariance", {"mu", "sigma", "xi", "theta"});
      for (Layer l : kGevLayers) {
        const auto name = layer_name(l);
        if (c.contains(name)) {
          cfg.spec.gev_cov[static_cast<int>(l)] = layer_cov_from_json(c[name], "model.covariance." + name);
        }
      }
      if (c.contains("theta")) cfg.spec.theta_cov = layer_cov_from_json(c["theta"], "model.covariance.theta");
    }
  }
  cfg.spec.validate();

  double beta_variance = 100.0;
  if (j.contains("priors")) beta_variance = get_or<double>(j["priors"], "beta_variance", 100.0);
  if (!(beta_variance > 0.0)) throw ValidationError("priors.beta_variance must be positive");
  cfg.priors = Priors::defaults(cfg.spec, beta_variance);
  if (j.contains("priors")) {
    const auto& p = j["priors"];
    check_keys(p, "priors",
               {"beta_variance", "beta_mu", "beta_sigma", "beta_xi", "beta_theta", "sill_mu", "sill_sigma",
                "sill_xi", "range_mu", "range_sigma", "range_xi", "range_theta", "tau_theta"});
    for (Layer l : kGevLayers) {
      const auto name = layer_name(l);
      if (p.contains("beta_" + name)) gaussian_from_json(p["beta_" + name], "priors.beta_" + name, cfg.priors.beta(l));
      if (p.contains("sill_" + name)) shape_scale_from_json(p["sill_" + name], "priors.sill_" + name, cfg.priors.sill(l));
      if (p.contains("range_" + name)) {
        shape_scale_from_json(p["range_" + name], "priors.range_" + name, cfg.priors.range(l));
      }
    }
    if (p.contains("beta_theta")) gaussian_from_json(p["beta_theta"], "priors.beta_theta", cfg.priors.beta_theta);
    if (p.contains("range_theta")) shape_scale_from_json(p["range_theta"], "priors.range_theta", cfg.priors.range_theta);
    if (p.contains("tau_theta")) shape_scale_from_json(p["tau_theta"], "priors.tau_theta", cfg.priors.tau_theta);
  }
  try {
    cfg.priors.validate(cfg.spec);
  } catch (const ContractError& e) {
    throw ValidationError(e.what());
  }

  if (j.contains("mcmc")) {
    const auto& m = j["mcmc"];
    check_keys(m, "mcmc", {"n_iter", "burnin", "thin", "seed", "n_chains"});
    cfg.mcmc.n_iter = get_or<long>(m, "n_iter", cfg.mcmc.n_iter);
    cfg.mcmc.burnin = get_or<long>(m, "burnin", cfg.mcmc.burnin);
    cfg.mcmc.thin = get_or<long>(m, "thin", cfg.mcmc.thin);
    cfg.mcmc.seed = get_or<std::uint64_t>(m, "seed", cfg.mcmc.seed);
    cfg.mcmc.n_chains = get_or<int>(m, "n_chains", cfg.mcmc.n_chains);
  }
  cfg.mcmc.settings().validate();

  if (j.contains("data")) {
    const auto& d = j["data"];
    check_keys(d, "data", {"meteorological", "project"});
    cfg.data.meteorological = get_or<bool>(d, "meteorological", true);
    cfg.data.project = get_or<bool>(d, "project", false);
  }
  if (j.contains("prediction")) {
    const auto& p = j["prediction"];
    check_keys(p, "prediction", {"return_levels", "seed"});
    cfg.prediction.return_levels = get_or<std::vector<double>>(p, "return_levels", cfg.prediction.return_levels);
    cfg.prediction.seed = get_or<std::uint64_t>(p, "seed", cfg.prediction.seed);
    for (double pr : cfg.prediction.return_levels) {
      if (!(pr > 0.0 && pr < 1.0)) throw ValidationError("prediction.return_levels must lie in (0, 1)");
    }
  }
  if (j.contains("simulation")) {
    const auto& s = j["simulation"];
    check_keys(s, "simulation", {"config", "k", "n", "seed", "holdout", "lambda_theta"});
    SimConfig sc;
    sc.scenario = scenario_from_name(get_or<std::string>(s, "config", "I"));
    sc.k = get_or<long>(s, "k", 25);
    sc.n = get_or<long>(s, "n", 50);
    sc.seed = get_or<std::uint64_t>(s, "seed", 1);
    sc.holdout = get_or<long>(s, "holdout", 0);
    sc.lambda_theta = get_or<double>(s, "lambda_theta", 1.0);
    sc.validate();
    cfg.simulation = sc;
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig& cfg) {
  json model = {{"mu", formula_to_json(cfg.spec.mu)},       {"sigma", formula_to_json(cfg.spec.sigma)},
                {"xi", formula_to_json(cfg.spec.xi)},       {"theta1", formula_to_json(cfg.spec.theta1)},
                {"theta2", formula_to_json(cfg.spec.theta2)}};
  json cov;
  for (Layer l : kGevLayers) cov[layer_name(l)] = layer_cov_to_json(cfg.spec.cov(l));
  cov["theta"] = layer_cov_to_json(cfg.spec.theta_cov);
  model["covariance"] = cov;

  json priors;
  for (Layer l : kGevLayers) {
    const auto name = layer_name(l);
    priors["beta_" + name] = gaussian_to_json(cfg.priors.beta(l));
    priors["sill_" + name] = shape_scale_to_json(cfg.priors.sill(l));
    priors["range_" + name] = shape_scale_to_json(cfg.priors.range(l));
  }
  if (cfg.spec.has_angular()) priors["beta_theta"] = gaussian_to_json(cfg.priors.beta_theta);
  priors["range_theta"] = shape_scale_to_json(cfg.priors.range_theta);
  priors["tau_theta"] = shape_scale_to_json(cfg.priors.tau_theta);

  json out = {
      {"model", model},
      {"priors", priors},
      {"mcmc",
       {{"n_iter", cfg.mcmc.n_iter},
        {"burnin", cfg.mcmc.burnin},
        {"thin", cfg.mcmc.thin},
        {"seed", cfg.mcmc.seed},
        {"n_chains", cfg.mcmc.n_chains}}},
      {"data", {{"meteorological", cfg.data.meteorological}, {"project", cfg.data.project}}},
      {"prediction", {{"return_levels", cfg.prediction.return_levels}, {"seed", cfg.prediction.seed}}},
  };
  if (cfg.simulation) {
    const auto& s = *cfg.simulation;
    out["simulation"] = {{"config", scenario_name(s.scenario)}, {"k", s.k},
                         {"n", s.n},           {"seed", s.seed},
                         {"holdout", s.holdout}, {"lambda_theta", s.lambda_theta}};
  }
  return out;
}

std::string config_digest(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

}  // namespace exang
