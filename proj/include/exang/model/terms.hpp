#pragma once

#include <string>
#include <vector>

#include "exang/extremes/gev.hpp"

namespace exang {

enum class TermKind { Intercept, Lon, Lat, Alt, Mu, Sigma, Xi, Quantile };

/// One covariate in a linear mean function. Geophysical terms read site
/// covariates; GEV-derived terms (mu, sigma, xi, q(p)) read the latent GEV
/// parameters at the site and are only allowed in the angular formulas.
struct Term {
  TermKind kind = TermKind::Intercept;
  double prob = 0.0;  // only for Quantile

  static Term intercept() { return {TermKind::Intercept, 0.0}; }
  static Term lon() { return {TermKind::Lon, 0.0}; }
  static Term lat() { return {TermKind::Lat, 0.0}; }
  static Term alt() { return {TermKind::Alt, 0.0}; }
  static Term mu() { return {TermKind::Mu, 0.0}; }
  static Term sigma() { return {TermKind::Sigma, 0.0}; }
  static Term xi() { return {TermKind::Xi, 0.0}; }
  static Term quantile(double p) { return {TermKind::Quantile, p}; }

  // Parses "intercept", "lon", "lat", "alt", "mu", "sigma", "xi"; throws
  // ValidationError naming the term otherwise.
  static Term from_name(const std::string& name);

  std::string name() const;
  bool depends_on_gev() const;
  bool operator==(const Term& other) const = default;
};

using Formula = std::vector<Term>;

struct SiteCovariates {
  double lon = 0.0;
  double lat = 0.0;
  double alt = 0.0;
};

double term_value(const Term& term, const SiteCovariates& site, const GevParams& gev);

bool formula_depends_on_gev(const Formula& f);

}  // namespace exang
