#include "qbb/groundgrid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qbb::groundgrid {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse " + what + ": '" + s + "'");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw std::runtime_error("cannot parse " + what + ": '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int grid_count(double resolution_deg, double span_deg) {
  const double n = span_deg / resolution_deg;
  const double r = std::round(n);
  if (resolution_deg <= 0.0 || std::abs(n - r) > 1e-9 || r < 1.0) {
    throw std::invalid_argument("land mask resolution must evenly divide 180 degrees");
  }
  return static_cast<int>(r);
}

}  // namespace

bool LatticeSpec::in_region(double lat_deg, double lon_deg) const {
  if (!has_region()) return true;
  return lat_deg >= region_lat_min && lat_deg <= region_lat_max && lon_deg >= region_lon_min &&
         lon_deg <= region_lon_max;
}

void LatticeSpec::validate() const {
  if (!(d_eq > 0.0)) throw std::invalid_argument("lattice: d_eq must be positive");
  if (!(ns_step > 0.0)) throw std::invalid_argument("lattice: ns_step must be positive");
  if (!(spacing_floor > 0.0)) throw std::invalid_argument("lattice: spacing_floor must be positive");
  if (snap_radius < 0.0) throw std::invalid_argument("lattice: snap_radius must be non-negative");
  if (!std::isfinite(alpha)) throw std::invalid_argument("lattice: alpha must be finite");
}

// ---------------------------------------------------------------------------
// LandMask

LandMask::LandMask(double resolution_deg, std::vector<bool> cells)
    : resolution_(resolution_deg),
      rows_(grid_count(resolution_deg, 180.0)),
      cols_(2 * rows_),
      cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw std::invalid_argument("land mask cell count does not match its resolution");
  }
}

LandMask LandMask::all_land(double resolution_deg) {
  const int rows = grid_count(resolution_deg, 180.0);
  return LandMask(resolution_deg, std::vector<bool>(static_cast<std::size_t>(rows) * 2 * rows, true));
}

LandMask LandMask::all_water(double resolution_deg) {
  const int rows = grid_count(resolution_deg, 180.0);
  return LandMask(resolution_deg, std::vector<bool>(static_cast<std::size_t>(rows) * 2 * rows, false));
}

LandMask LandMask::box(double lat_min, double lat_max, double lon_min, double lon_max, double resolution_deg) {
  LandMask m = all_water(resolution_deg);
  for (int r = 0; r < m.rows_; ++r) {
    for (int c = 0; c < m.cols_; ++c) {
      const auto [lat, lon] = m.cell_center(r, c);
      const double la = rad2deg(lat), lo = rad2deg(lon);
      if (la >= lat_min && la <= lat_max && lo >= lon_min && lo <= lon_max) {
        m.cells_[static_cast<std::size_t>(r) * m.cols_ + c] = true;
      }
    }
  }
  return m;
}

LandMask LandMask::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open land mask: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("land mask is empty: " + path.string());
  std::istringstream header(line);
  std::string key;
  double res = 0.0;
  if (!(header >> key >> res) || key != "resolution_deg") {
    throw std::runtime_error("land mask header must read 'resolution_deg <value>': " + path.string());
  }
  const int rows = grid_count(res, 180.0);
  const int cols = 2 * rows;
  std::vector<bool> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  int r = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (static_cast<int>(line.size()) != cols) {
      throw std::runtime_error("land mask row " + std::to_string(r) + " has " + std::to_string(line.size()) +
                               " cells, expected " + std::to_string(cols));
    }
    for (char ch : line) {
      if (ch != '0' && ch != '1') throw std::runtime_error("land mask cells must be '0' or '1'");
      cells.push_back(ch == '1');
    }
    ++r;
  }
  if (r != rows) {
    throw std::runtime_error("land mask has " + std::to_string(r) + " rows, expected " + std::to_string(rows));
  }
  return LandMask(res, std::move(cells));
}

void LandMask::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write land mask: " + path.string());
  out << "resolution_deg " << resolution_ << '\n';
  std::string row(static_cast<std::size_t>(cols_), '0');
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) row[static_cast<std::size_t>(c)] = land(r, c) ? '1' : '0';
    out << row << '\n';
  }
}

bool LandMask::empty() const { return std::none_of(cells_.begin(), cells_.end(), [](bool b) { return b; }); }

std::pair<int, int> LandMask::cell_of(double lat, double lon) const {
  const double lat_deg = rad2deg(lat);
  const double lon_deg = rad2deg(wrap_pi(lon));
  int row = static_cast<int>(std::floor((90.0 - lat_deg) / resolution_));
  int col = static_cast<int>(std::floor((lon_deg + 180.0) / resolution_));
  row = std::clamp(row, 0, rows_ - 1);
  col = std::clamp(col, 0, cols_ - 1);
  return {row, col};
}

bool LandMask::is_land(double lat, double lon) const {
  const auto [r, c] = cell_of(lat, lon);
  return land(r, c);
}

std::pair<double, double> LandMask::cell_center(int row, int col) const {
  return {deg2rad(90.0 - (row + 0.5) * resolution_), deg2rad(-180.0 + (col + 0.5) * resolution_)};
}

// ---------------------------------------------------------------------------
// Lattice

double ew_spacing(double lat, double alpha, const LatticeSpec& spec) {
  const double c = std::cos(lat);
  if (std::abs(lat) >= 0.5 * kPi || c <= 0.0) return spec.spacing_floor;
  return std::max(spec.spacing_floor, spec.d_eq / std::pow(c, alpha));
}

double longitude_step(double lat, double alpha, const LatticeSpec& spec) {
  const double c = std::cos(lat);
  if (c <= 1e-12) return kTwoPi;
  return std::min(kTwoPi, ew_spacing(lat, alpha, spec) / (kEarthRadius * c));
}

std::vector<LatticeRow> lattice_rows(const LatticeSpec& spec) {
  spec.validate();
  const int kmax = static_cast<int>(std::floor(90.0 / spec.ns_step + 1e-9));
  std::vector<LatticeRow> rows;
  rows.reserve(static_cast<std::size_t>(2 * kmax + 1));
  for (int k = -kmax; k <= kmax; ++k) {
    LatticeRow row;
    row.lat = deg2rad(std::clamp(k * spec.ns_step, -90.0, 90.0));
    row.lon_step = longitude_step(row.lat, spec.alpha, spec);
    const int n = std::max(1, static_cast<int>(std::floor(kTwoPi / row.lon_step + 1e-9)));
    row.lon_offset = (std::abs(k) % 2 == 1) ? 0.5 * row.lon_step : 0.0;
    row.lons.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) row.lons.push_back(wrap_pi(-kPi + row.lon_offset + j * row.lon_step));
    std::sort(row.lons.begin(), row.lons.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Nearest land cell centre within `radius` metres of (lat, lon).
bool snap_to_land(const LandMask& mask, double lat, double lon, double radius, double& out_lat, double& out_lon) {
  const double ang = radius / kEarthRadius;
  const double res = deg2rad(mask.resolution());
  const auto [row0, col0] = mask.cell_of(lat, lon);
  const int drow = static_cast<int>(std::ceil(ang / res)) + 1;

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int r = std::max(0, row0 - drow); r <= std::min(mask.rows() - 1, row0 + drow); ++r) {
    const double row_lat = mask.cell_center(r, 0).first;
    const double band_edge = std::min(0.5 * kPi, std::max(std::abs(row_lat), std::abs(lat)) + 0.5 * res);
    const double c = std::cos(band_edge);
    int dcol = mask.cols();
    if (c > 1e-9) dcol = std::min(mask.cols(), static_cast<int>(std::ceil(ang / (res * c))) + 1);
    const int c_lo = (2 * dcol + 1 >= mask.cols()) ? 0 : col0 - dcol;
    const int c_hi = (2 * dcol + 1 >= mask.cols()) ? mask.cols() - 1 : col0 + dcol;
    for (int cc = c_lo; cc <= c_hi; ++cc) {
      const int col = ((cc % mask.cols()) + mask.cols()) % mask.cols();
      if (!mask.land(r, col)) continue;
      const auto [clat, clon] = mask.cell_center(r, col);
      const double d = central_angle(lat, lon, clat, clon);
      if (d < best) {
        best = d;
        out_lat = clat;
        out_lon = clon;
        found = true;
      }
    }
  }
  return found && best * kEarthRadius <= radius;
}

}  // namespace

std::vector<GroundStation> generate_lattice(const LatticeSpec& spec, const LandMask& mask) {
  const auto rows = lattice_rows(spec);

  // Cells already holding an on-land candidate; a water candidate snapping
  // onto an occupied cell is dropped, so snapping never duplicates a station.
  std::set<std::pair<int, int>> occupied;
  for (const auto& row : rows) {
    for (double lon : row.lons) {
      if (spec.in_region(rad2deg(row.lat), rad2deg(lon)) && mask.is_land(row.lat, lon)) {
        occupied.insert(mask.cell_of(row.lat, lon));
      }
    }
  }

  std::vector<GroundStation> out;
  for (const auto& row : rows) {
    std::vector<std::pair<double, double>> kept;
    for (double lon : row.lons) {
      if (!spec.in_region(rad2deg(row.lat), rad2deg(lon))) continue;
      if (mask.is_land(row.lat, lon)) {
        kept.emplace_back(row.lat, lon);
        continue;
      }
      double slat = 0.0, slon = 0.0;
      if (!snap_to_land(mask, row.lat, lon, spec.snap_radius, slat, slon)) continue;
      if (!occupied.insert(mask.cell_of(slat, slon)).second) continue;
      kept.emplace_back(slat, slon);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    for (const auto& [lat, lon] : kept) {
      GroundStation gs;
      gs.gs_id = static_cast<int>(out.size());
      gs.lat = lat;
      gs.lon = lon;
      gs.pos_ecef = spherical_to_cartesian(lat, lon);
      out.push_back(gs);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traffic matrix

TrafficMatrix map_cities(const std::vector<City>& cities, const std::vector<GroundStation>& stations) {
  if (stations.empty()) throw std::invalid_argument("map_cities: no ground stations to map onto");
  TrafficMatrix tm;
  tm.cities = cities;
  tm.station_of_city.reserve(cities.size());
  for (const auto& city : cities) {
    int best_id = stations.front().gs_id;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& gs : stations) {
      const double d = central_angle(city.lat, city.lon, gs.lat, gs.lon);
      if (d < best || (d == best && gs.gs_id < best_id)) {
        best = d;
        best_id = gs.gs_id;
      }
    }
    tm.station_of_city.push_back(best_id);
  }
  const int n = static_cast<int>(cities.size());
  tm.pairs.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) tm.pairs.emplace_back(i, j);
  }
  return tm;
}

std::vector<City> load_cities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open city list: " + path.string());
  std::vector<City> cities;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (fields.size() != 3) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected name,lat,lon");
    }
    if (lineno == 1 && fields[1] == "lat_deg") continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const double lat = parse_double(fields[1], "latitude at " + where);
    const double lon = parse_double(fields[2], "longitude at " + where);
    if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
      throw std::runtime_error(where + ": coordinates out of range");
    }
    cities.push_back(City{fields[0], deg2rad(lat), deg2rad(lon)});
  }
  return cities;
}

void save_stations(const std::filesystem::path& path, const std::vector<GroundStation>& stations) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write station list: " + path.string());
  out.precision(17);
  out << "gs_id,lat_deg,lon_deg\n";
  for (const auto& gs : stations) out << gs.gs_id << ',' << rad2deg(gs.lat) << ',' << rad2deg(gs.lon) << '\n';
}

}  // namespace qbb::groundgrid
