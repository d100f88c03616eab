#include "exang/model/terms.hpp"

#include <sstream>

#include "exang/errors.hpp"

namespace exang {

Term Term::from_name(const std::string& name) {
  if (name == "intercept") return intercept();
  if (name == "lon") return lon();
  if (name == "lat") return lat();
  if (name == "alt") return alt();
  if (name == "mu") return mu();
  if (name == "sigma") return sigma();
  if (name == "xi") return xi();
  throw ValidationError("unknown formula term '" + name + "'");
}

std::string Term::name() const {
  switch (kind) {
    case TermKind::Intercept: return "intercept";
    case TermKind::Lon: return "lon";
    case TermKind::Lat: return "lat";
    case TermKind::Alt: return "alt";
    case TermKind::Mu: return "mu";
    case TermKind::Sigma: return "sigma";
    case TermKind::Xi: return "xi";
    case TermKind::Quantile: {
      std::ostringstream out;
      out << "q(" << prob << ")";
      return out.str();
    }
  }
  return "?";
}

bool Term::depends_on_gev() const {
  return kind == TermKind::Mu || kind == TermKind::Sigma || kind == TermKind::Xi ||
         kind == TermKind::Quantile;
}

double term_value(const Term& term, const SiteCovariates& site, const GevParams& gev) {
  switch (term.kind) {
    case TermKind::Intercept: return 1.0;
    case TermKind::Lon: return site.lon;
    case TermKind::Lat: return site.lat;
    case TermKind::Alt: return site.alt;
    case TermKind::Mu: return gev.mu;
    case TermKind::Sigma: return gev.sigma;
    case TermKind::Xi: return gev.xi;
    case TermKind::Quantile: return gev_quantile(term.prob, gev);
  }
  return 0.0;
}

bool formula_depends_on_gev(const Formula& f) {
  for (const auto& t : f) {
    if (t.depends_on_gev()) return true;
  }
  return false;
}

}  // namespace exang
