#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "exang/model/dataset.hpp"

namespace exang {

/// How directions and coordinates in station files are interpreted.
/// meteorological: directions are degrees clockwise from North (the
/// direction the wind comes from) and map to (90 - d) mod 360 in the
/// counterclockwise-from-East convention; otherwise d is already
/// counterclockwise from East. project: equirectangular projection to km
/// about the mean station lon/lat before computing distances.
struct DataOptions {
  bool meteorological = true;
  bool project = false;
};

struct GeoOrigin {
  double lon0 = 0.0;
  double lat0 = 0.0;
};

inline constexpr double kEarthRadiusKm = 6371.0;

GeoOrigin mean_origin(const std::vector<Site>& sites);

// Sets Site::coord from lon/lat, projected about origin when requested.
void assign_coordinates(std::vector<Site>& sites, bool project, const GeoOrigin& origin);

double direction_to_radians(double degrees, bool meteorological);
double radians_to_direction(double radians, bool meteorological);

/// Station file with header station_id,lon,lat,alt,year,max,direction.
/// Empty max/direction fields are missing values; station-years absent from
/// the file are missing as well. Throws ValidationError naming the line on
/// malformed rows, duplicate (station, year) pairs or inconsistent station
/// coordinates.
Dataset read_dataset_csv(std::istream& in, const DataOptions& opts);
Dataset read_dataset_csv(const std::string& path, const DataOptions& opts);

void write_dataset_csv(std::ostream& out, const Dataset& data, const DataOptions& opts);
void write_dataset_csv(const std::string& path, const Dataset& data, const DataOptions& opts);

/// Query-site file with header site_id,lon,lat,alt. Coordinates are assigned
/// with the given origin so that they match the fitted data.
std::vector<Site> read_sites_csv(const std::string& path, bool project, const GeoOrigin& origin);
void write_sites_csv(const std::string& path, const std::vector<Site>& sites);

}  // namespace exang
