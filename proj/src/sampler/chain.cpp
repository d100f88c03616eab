#include "exang/sampler/chain.hpp"

#include <exception>
#include <thread>

#include "exang/errors.hpp"
#include "exang/random.hpp"
#include "exang/sampler/gibbs.hpp"

namespace exang {

namespace {

const char* kLayerNames[3] = {"mu", "sigma", "xi"};

std::string indexed(const std::string& base, Eigen::Index i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

TraceLayout::TraceLayout(const ModelSpec& spec, Eigen::Index k) : spec_(spec), k_(k) {
  for (const char* l : kLayerNames) {
    for (Eigen::Index j = 0; j < k; ++j) names_.push_back(indexed(l, j));
  }
  for (int l = 0; l < 3; ++l) {
    const auto& f = spec.formula(static_cast<Layer>(l));
    for (std::size_t c = 0; c < f.size(); ++c) {
      names_.push_back(indexed(std::string("beta_") + kLayerNames[l], static_cast<Eigen::Index>(c)));
    }
  }
  for (const char* prefix : {"tau_", "lambda_", "kappa_"}) {
    for (const char* l : kLayerNames) names_.push_back(std::string(prefix) + l);
  }
  if (spec.has_angular()) {
    for (std::size_t c = 0; c < spec.theta1.size(); ++c) names_.push_back(indexed("beta_theta1", static_cast<Eigen::Index>(c)));
    for (std::size_t c = 0; c < spec.theta2.size(); ++c) names_.push_back(indexed("beta_theta2", static_cast<Eigen::Index>(c)));
    for (const char* s : {"tau_theta", "rho_theta", "lambda_theta", "kappa_theta"}) names_.push_back(s);
  }
}

Eigen::RowVectorXd TraceLayout::encode(const ChainState& state) const {
  Eigen::RowVectorXd row(size());
  Eigen::Index c = 0;
  for (const auto& g : state.gev) {
    for (Eigen::Index j = 0; j < k_; ++j) row(c++) = g.values(j);
  }
  for (const auto& g : state.gev) {
    for (Eigen::Index b = 0; b < g.beta.size(); ++b) row(c++) = g.beta(b);
  }
  for (const auto& g : state.gev) row(c++) = g.sill;
  for (const auto& g : state.gev) row(c++) = g.range;
  for (const auto& g : state.gev) row(c++) = g.shape;
  if (spec_.has_angular()) {
    const auto& a = state.angular;
    for (Eigen::Index b = 0; b < a.beta.size(); ++b) row(c++) = a.beta(b);
    row(c++) = a.tau;
    row(c++) = a.rho;
    row(c++) = a.range;
    row(c++) = a.shape;
  }
  return row;
}

ChainState TraceLayout::decode(const Eigen::RowVectorXd& row) const {
  if (row.size() != size()) throw ContractError("TraceLayout::decode: row has wrong length");
  ChainState s;
  Eigen::Index c = 0;
  for (auto& g : s.gev) {
    g.values = row.segment(c, k_).transpose();
    c += k_;
  }
  for (int l = 0; l < 3; ++l) {
    const auto p = static_cast<Eigen::Index>(spec_.formula(static_cast<Layer>(l)).size());
    s.gev[l].beta = row.segment(c, p).transpose();
    c += p;
  }
  for (auto& g : s.gev) g.sill = row(c++);
  for (auto& g : s.gev) g.range = row(c++);
  for (auto& g : s.gev) g.shape = row(c++);
  if (spec_.has_angular()) {
    auto& a = s.angular;
    const auto p = spec_.n_beta_theta();
    a.beta = row.segment(c, p).transpose();
    c += p;
    a.tau = row(c++);
    a.rho = row(c++);
    a.range = row(c++);
    a.shape = row(c++);
  }
  return s;
}

std::optional<Eigen::Index> TraceLayout::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Eigen::Index>(i);
  }
  return std::nullopt;
}

Eigen::Index TraceLayout::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw ContractError("unknown trace column '" + name + "'");
}

Eigen::Index Trace::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw ContractError("unknown trace column '" + name + "'");
}

Eigen::VectorXd Trace::values(const std::string& name) const { return draws.col(column(name)); }

void ChainSettings::validate() const {
  if (n_iter < 0) throw ValidationError("n_iter must be nonnegative");
  if (n_iter > 0 && !(burnin >= 0 && burnin < n_iter)) {
    throw ValidationError("burnin must satisfy 0 <= burnin < n_iter");
  }
  if (thin < 1) throw ValidationError("thin must be at least 1");
  if (n_chains < 1) throw ValidationError("n_chains must be at least 1");
}

namespace {

struct ChainOutput {
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<long> iterations;
  AcceptanceReport report;
  ChainState final_state;
};

ChainOutput run_one(const Dataset& data, const ModelSpec& spec, const Priors& priors, const ChainSettings& settings,
                    const TraceLayout& layout, int chain) {
  GibbsSampler sampler(data, spec, priors);
  Rng rng = make_stream(settings.seed, static_cast<std::uint64_t>(chain));
  ChainOutput out;
  ChainState state = settings.initial_state ? *settings.initial_state : sampler.initial_state();
  state.check_invariants(sampler.data(), spec);
  TuningState tuning = sampler.initial_tuning(state);
  tuning.adapting = settings.adapt && settings.burnin > 0;
  out.report.chain = chain;
  if (settings.n_iter == 0) {
    out.rows.push_back(layout.encode(state));
    out.iterations.push_back(0);
  }
  for (long t = 1; t <= settings.n_iter; ++t) {
    sampler.step(state, tuning, rng);
    if (t == settings.burnin) {
      tuning.adapting = false;
      tuning.reset_counters();
    }
    if (t > settings.burnin && (t - settings.burnin) % settings.thin == 0) {
      out.rows.push_back(layout.encode(state));
      out.iterations.push_back(t);
    }
  }
  out.report.rates = tuning.acceptance_rates(spec.has_angular());
  out.final_state = std::move(state);
  return out;
}

}  // namespace

FitResult run_chain(const Dataset& data, const ModelSpec& spec, const Priors& priors,
                    const ChainSettings& settings) {
  settings.validate();
  data.validate();
  spec.validate();
  priors.validate(spec);
  const TraceLayout layout(spec, data.k());

  std::vector<ChainOutput> outputs(static_cast<std::size_t>(settings.n_chains));
  std::vector<std::exception_ptr> errors(outputs.size());
  auto work = [&](int c) {
    try {
      outputs[static_cast<std::size_t>(c)] = run_one(data, spec, priors, settings, layout, c);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };
  if (settings.n_chains == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int c = 0; c < settings.n_chains; ++c) threads.emplace_back(work, c);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  FitResult result;
  result.trace.columns = layout.names();
  std::size_t total = 0;
  for (const auto& o : outputs) total += o.rows.size();
  result.trace.draws.resize(static_cast<Eigen::Index>(total), layout.size());
  Eigen::Index r = 0;
  for (int c = 0; c < settings.n_chains; ++c) {
    auto& o = outputs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < o.rows.size(); ++i) {
      result.trace.draws.row(r++) = o.rows[i];
      result.trace.chain.push_back(c);
      result.trace.iteration.push_back(o.iterations[i]);
    }
    result.acceptance.push_back(std::move(o.report));
    result.final_states.push_back(std::move(o.final_state));
  }
  return result;
}

}  // namespace exang
