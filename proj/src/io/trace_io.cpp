#include "exang/io/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exang/errors.hpp"
#include "exang/inference/circular.hpp"
#include "exang/io/dataset_csv.hpp"
#include "exang/numerics/distributions.hpp"

namespace exang {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    if (!f.empty() && f.back() == '\r') f.pop_back();
    out.push_back(f);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_value(const std::string& f, long line) {
  if (f == "inf" || f == "-inf" || f == "nan") return std::stod(f);
  double v = 0.0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
    throw ValidationError("trace line " + std::to_string(line) + ": invalid value '" + f + "'");
  }
  return v;
}

std::string level_tag(double p) {
  std::ostringstream s;
  s << p;
  return s.str();
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "chain,iteration";
  for (const auto& c : trace.columns) out << ',' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < trace.rows(); ++r) {
    out << trace.chain[static_cast<std::size_t>(r)] << ',' << trace.iteration[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < trace.draws.cols(); ++c) out << ',' << fmt(trace.draws(r, c));
    out << '\n';
  }
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_trace_csv(out, trace);
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("trace file is empty");
  auto header = split(line);
  if (header.size() < 3 || header[0] != "chain" || header[1] != "iteration") {
    throw ValidationError("trace line 1: expected header starting with chain,iteration");
  }
  Trace t;
  t.columns.assign(header.begin() + 2, header.end());
  std::vector<std::vector<double>> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split(line);
    if (f.size() != header.size()) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
    }
    t.chain.push_back(static_cast<int>(parse_value(f[0], line_no)));
    t.iteration.push_back(static_cast<long>(parse_value(f[1], line_no)));
    std::vector<double> r;
    for (std::size_t c = 2; c < f.size(); ++c) r.push_back(parse_value(f[c], line_no));
    rows.push_back(std::move(r));
  }
  t.draws.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      t.draws(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return t;
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace '" + path + "'");
  return read_trace_csv(in);
}

json make_manifest(const RunConfig& cfg, const FitResult& fit, const std::string& data_path) {
  json acc = json::array();
  for (const auto& a : fit.acceptance) {
    json rates = json::object();
    for (const auto& [name, rate] : a.rates) rates[name] = rate;
    acc.push_back({{"chain", a.chain}, {"rates", rates}});
  }
  return {{"config", to_json(cfg)},
          {"config_digest", config_digest(cfg)},
          {"data", data_path},
          {"seed", cfg.mcmc.seed},
          {"n_chains", cfg.mcmc.n_chains},
          {"retained_rows", fit.trace.rows()},
          {"acceptance", acc}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

json waic_to_json(const WaicReport& r) {
  auto block = [](const WaicBlock& b) {
    return json{{"lppd", b.lppd}, {"p_waic", b.p_waic}, {"waic", b.waic}, {"n_points", b.n_points}};
  };
  return {{"waic_theta", r.theta.waic}, {"waic_eta", r.eta.waic}, {"waic_total", r.total},
          {"theta", block(r.theta)},   {"eta", block(r.eta)}};
}

SitePrediction summarize_prediction(const Site& site, const PredictionDraws& draws,
                                    const std::vector<double>& return_levels, bool meteorological) {
  SitePrediction p;
  p.site = site;
  p.mu = summarize_draws(draws.mu);
  p.sigma = summarize_draws(draws.sigma);
  p.xi = summarize_draws(draws.xi);
  for (double pr : return_levels) p.return_levels.emplace_back(pr, return_level(draws, pr));
  if (draws.theta.size() > 0) {
    const CircularSummary cs =
        circular_summary(std::span<const double>(draws.theta.data(), static_cast<std::size_t>(draws.theta.size())));
    p.has_angle = true;
    p.angle_mode_deg = radians_to_direction(cs.mode, meteorological);
    p.angle_dispersion_deg = cs.dispersion * 180.0 / kPi;
    p.n_modes = cs.n_modes;
  }
  return p;
}

void write_predictions_csv(const std::string& path, const std::vector<SitePrediction>& preds) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "site_id,lon,lat,alt";
  for (const char* p : {"mu", "sigma", "xi"}) out << ',' << p << "_med," << p << "_lo," << p << "_hi";
  if (!preds.empty()) {
    for (const auto& [pr, s] : preds.front().return_levels) {
      const auto tag = level_tag(pr);
      out << ",rl_" << tag << "_med,rl_" << tag << "_lo,rl_" << tag << "_hi";
    }
  }
  out << ",angle_mode,angle_dispersion,n_modes\n";
  auto triple = [&](const PosteriorSummary& s) { out << ',' << fmt(s.median) << ',' << fmt(s.lo) << ',' << fmt(s.hi); };
  for (const auto& p : preds) {
    const auto& c = p.site.covariates;
    out << p.site.id << ',' << fmt(c.lon) << ',' << fmt(c.lat) << ',' << (std::isnan(c.alt) ? "" : fmt(c.alt));
    triple(p.mu);
    triple(p.sigma);
    triple(p.xi);
    for (const auto& rl : p.return_levels) triple(rl.second);
    if (p.has_angle) {
      out << ',' << fmt(p.angle_mode_deg) << ',' << fmt(p.angle_dispersion_deg) << ',' << p.n_modes;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

json predictions_to_json(const std::vector<SitePrediction>& preds) {
  auto triple = [](const PosteriorSummary& s) { return json{{"median", s.median}, {"lo", s.lo}, {"hi", s.hi}}; };
  json arr = json::array();
  for (const auto& p : preds) {
    json rl = json::object();
    for (const auto& [pr, s] : p.return_levels) rl[level_tag(pr)] = triple(s);
    json o = {{"site_id", p.site.id},    {"lon", p.site.covariates.lon}, {"lat", p.site.covariates.lat},
              {"alt", std::isnan(p.site.covariates.alt) ? json(nullptr) : json(p.site.covariates.alt)},
              {"mu", triple(p.mu)},     {"sigma", triple(p.sigma)},      {"xi", triple(p.xi)},
              {"return_levels", rl}};
    if (p.has_angle) {
      o["angle_mode"] = p.angle_mode_deg;
      o["angle_dispersion"] = std::isfinite(p.angle_dispersion_deg) ? json(p.angle_dispersion_deg) : json(nullptr);
      o["n_modes"] = p.n_modes;
    }
    arr.push_back(o);
  }
  return arr;
}

std::vector<ColumnSummary> summarize_trace(const Trace& trace) {
  if (trace.rows() == 0) throw ValidationError("trace has no rows");
  std::vector<ColumnSummary> out;
  for (std::size_t c = 0; c < trace.columns.size(); ++c) {
    out.push_back({trace.columns[c], summarize_draws(trace.draws.col(static_cast<Eigen::Index>(c)))});
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<ColumnSummary>& rows) {
  out << "parameter,median,lo95,hi95\n";
  for (const auto& r : rows) {
    out << r.name << ',' << fmt(r.summary.median) << ',' << fmt(r.summary.lo) << ',' << fmt(r.summary.hi) << '\n';
  }
}

}  // namespace exang
