#include "exang/model/dataset.hpp"

#include <set>

#include "exang/errors.hpp"
#include "exang/numerics/distributions.hpp"

namespace exang {

SiteCoords coords_of(const std::vector<Site>& sites) {
  SiteCoords c(static_cast<Eigen::Index>(sites.size()), 2);
  for (std::size_t j = 0; j < sites.size(); ++j) c.row(static_cast<Eigen::Index>(j)) = sites[j].coord;
  return c;
}

SiteCoords Dataset::coords() const { return coords_of(sites); }

void Dataset::validate() const {
  if (sites.empty()) throw ValidationError("dataset has no sites");
  if (maxima.cols() != k() || angles.cols() != k() || angles.rows() != maxima.rows()) {
    throw ValidationError("dataset matrices do not match the site list");
  }
  if (n() == 0) throw ValidationError("dataset has no replicates");
  if (!years.empty() && static_cast<Eigen::Index>(years.size()) != n()) {
    throw ValidationError("dataset year list does not match the replicate count");
  }
  std::set<std::string> ids;
  for (const auto& s : sites) {
    if (!ids.insert(s.id).second) throw ValidationError("duplicate station id '" + s.id + "'");
    if (!s.coord.allFinite()) throw ValidationError("station '" + s.id + "' has non-finite coordinates");
  }
  for (Eigen::Index j = 0; j < k(); ++j) {
    bool any = false;
    for (Eigen::Index i = 0; i < n(); ++i) {
      if (has_max(i, j)) {
        any = true;
        if (!std::isfinite(maxima(i, j))) throw ValidationError("non-finite maximum");
      }
      if (has_angle(i, j) && !(angles(i, j) >= 0.0 && angles(i, j) < kTwoPi)) {
        throw ValidationError("angle outside [0, 2pi) at station '" + sites[static_cast<std::size_t>(j)].id + "'");
      }
    }
    if (!any) throw ValidationError("station '" + sites[static_cast<std::size_t>(j)].id + "' has no observed maximum");
  }
}

}  // namespace exang
