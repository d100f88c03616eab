#include "exang/io/dataset_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "exang/errors.hpp"
#include "exang/numerics/distributions.hpp"
#include "exang/pgp/projected_gp.hpp"

namespace exang {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDegree = kPi / 180.0;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

std::string at_line(long line) { return "line " + std::to_string(line) + ": "; }

double parse_number(const std::string& field, const char* what, long line, bool allow_empty) {
  if (field.empty()) {
    if (allow_empty) return kNaN;
    throw ValidationError(at_line(line) + "missing " + what);
  }
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ValidationError(at_line(line) + "invalid " + what + " '" + field + "'");
  }
  return v;
}

int parse_int(const std::string& field, const char* what, long line) {
  int v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ValidationError(at_line(line) + "invalid " + what + " '" + field + "'");
  }
  return v;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  return out;
}

}  // namespace

GeoOrigin mean_origin(const std::vector<Site>& sites) {
  GeoOrigin o;
  if (sites.empty()) return o;
  for (const auto& s : sites) {
    o.lon0 += s.covariates.lon;
    o.lat0 += s.covariates.lat;
  }
  o.lon0 /= static_cast<double>(sites.size());
  o.lat0 /= static_cast<double>(sites.size());
  return o;
}

void assign_coordinates(std::vector<Site>& sites, bool project, const GeoOrigin& origin) {
  for (auto& s : sites) {
    if (!project) {
      s.coord = Eigen::Vector2d(s.covariates.lon, s.covariates.lat);
      continue;
    }
    const double x = kEarthRadiusKm * (s.covariates.lon - origin.lon0) * kDegree * std::cos(origin.lat0 * kDegree);
    const double y = kEarthRadiusKm * (s.covariates.lat - origin.lat0) * kDegree;
    s.coord = Eigen::Vector2d(x, y);
  }
}

double direction_to_radians(double degrees, bool meteorological) {
  const double d = meteorological ? 90.0 - degrees : degrees;
  return wrap_angle(d * kDegree);
}

double radians_to_direction(double radians, bool meteorological) {
  const double d = wrap_angle(radians) / kDegree;
  if (!meteorological) return d;
  const double m = std::fmod(90.0 - d + 360.0, 360.0);
  return m >= 360.0 ? 0.0 : m;
}

Dataset read_dataset_csv(std::istream& in, const DataOptions& opts) {
  static const std::vector<std::string> kHeader = {"station_id", "lon", "lat", "alt", "year", "max", "direction"};
  std::string line;
  long line_no = 0;
  // Skip a UTF-8 byte order mark and blank lines before the header.
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line = line.substr(3);
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (split(line) != kHeader) {
    throw ValidationError(at_line(line_no) + "expected header station_id,lon,lat,alt,year,max,direction");
  }

  struct Record {
    std::string station;
    int year;
    double max, dir;
  };
  std::vector<Record> records;
  std::map<std::string, Site> stations;
  std::vector<std::string> order;
  std::set<std::pair<std::string, int>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split(line);
    if (f.size() != kHeader.size()) {
      throw ValidationError(at_line(line_no) + "expected 7 fields, found " + std::to_string(f.size()));
    }
    if (f[0].empty()) throw ValidationError(at_line(line_no) + "missing station_id");
    Site s;
    s.id = f[0];
    s.covariates.lon = parse_number(f[1], "lon", line_no, false);
    s.covariates.lat = parse_number(f[2], "lat", line_no, false);
    s.covariates.alt = parse_number(f[3], "alt", line_no, false);
    const int year = parse_int(f[4], "year", line_no);
    const double mx = parse_number(f[5], "max", line_no, true);
    const double dir = parse_number(f[6], "direction", line_no, true);
    if (!std::isnan(dir) && (dir < 0.0 || dir > 360.0)) {
      throw ValidationError(at_line(line_no) + "direction must lie in [0, 360]");
    }
    if (!seen.insert({s.id, year}).second) {
      throw ValidationError(at_line(line_no) + "duplicate record for station '" + s.id + "' in year " +
                            std::to_string(year));
    }
    auto it = stations.find(s.id);
    if (it == stations.end()) {
      stations.emplace(s.id, s);
      order.push_back(s.id);
    } else {
      const auto& c = it->second.covariates;
      if (c.lon != s.covariates.lon || c.lat != s.covariates.lat || c.alt != s.covariates.alt) {
        throw ValidationError(at_line(line_no) + "station '" + s.id + "' changes coordinates");
      }
    }
    records.push_back({s.id, year, mx, dir});
  }
  if (records.empty()) throw ValidationError("data file has no records");

  Dataset d;
  for (const auto& id : order) d.sites.push_back(stations.at(id));
  std::set<int> years;
  for (const auto& r : records) years.insert(r.year);
  d.years.assign(years.begin(), years.end());
  std::map<std::string, Eigen::Index> col;
  for (std::size_t j = 0; j < order.size(); ++j) col[order[j]] = static_cast<Eigen::Index>(j);
  std::map<int, Eigen::Index> row;
  for (std::size_t i = 0; i < d.years.size(); ++i) row[d.years[i]] = static_cast<Eigen::Index>(i);

  d.maxima = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(d.years.size()), d.k(), kNaN);
  d.angles = d.maxima;
  for (const auto& r : records) {
    const auto i = row.at(r.year);
    const auto j = col.at(r.station);
    d.maxima(i, j) = r.max;
    d.angles(i, j) = std::isnan(r.dir) ? kNaN : direction_to_radians(r.dir, opts.meteorological);
  }
  assign_coordinates(d.sites, opts.project, mean_origin(d.sites));
  d.validate();
  return d;
}

Dataset read_dataset_csv(const std::string& path, const DataOptions& opts) {
  auto in = open_in(path);
  return read_dataset_csv(in, opts);
}

void write_dataset_csv(std::ostream& out, const Dataset& data, const DataOptions& opts) {
  out << "station_id,lon,lat,alt,year,max,direction\n";
  for (Eigen::Index j = 0; j < data.k(); ++j) {
    const auto& s = data.sites[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      if (!data.has_max(i, j) && !data.has_angle(i, j)) continue;
      const double dir = data.has_angle(i, j) ? radians_to_direction(data.angles(i, j), opts.meteorological) : kNaN;
      out << s.id << ',' << fmt(s.covariates.lon) << ',' << fmt(s.covariates.lat) << ','
          << fmt(s.covariates.alt) << ',' << data.years[static_cast<std::size_t>(i)] << ','
          << fmt(data.maxima(i, j)) << ',' << fmt(dir) << '\n';
    }
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data, const DataOptions& opts) {
  auto out = open_out(path);
  write_dataset_csv(out, data, opts);
}

std::vector<Site> read_sites_csv(const std::string& path, bool project, const GeoOrigin& origin) {
  auto in = open_in(path);
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty");
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line = line.substr(3);
  if (split(line) != std::vector<std::string>{"site_id", "lon", "lat", "alt"}) {
    throw ValidationError(at_line(line_no) + "expected header site_id,lon,lat,alt");
  }
  std::vector<Site> sites;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split(line);
    if (f.size() != 4) throw ValidationError(at_line(line_no) + "expected 4 fields, found " + std::to_string(f.size()));
    Site s;
    s.id = f[0];
    s.covariates.lon = parse_number(f[1], "lon", line_no, false);
    s.covariates.lat = parse_number(f[2], "lat", line_no, false);
    s.covariates.alt = parse_number(f[3], "alt", line_no, true);
    sites.push_back(s);
  }
  assign_coordinates(sites, project, origin);
  return sites;
}

void write_sites_csv(const std::string& path, const std::vector<Site>& sites) {
  auto out = open_out(path);
  out << "site_id,lon,lat,alt\n";
  for (const auto& s : sites) {
    out << s.id << ',' << fmt(s.covariates.lon) << ',' << fmt(s.covariates.lat) << ',' << fmt(s.covariates.alt)
        << '\n';
  }
}

}  // namespace exang
