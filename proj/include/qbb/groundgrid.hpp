#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qbb/geometry.hpp"

namespace qbb::groundgrid {

struct LatticeSpec {
  double d_eq = 4.0e5;            // m, East-West spacing at the equator
  double alpha = 0.8;             // anisotropy exponent
  double ns_step = 3.6;           // deg between rows
  double snap_radius = 1.0e5;     // m
  double spacing_floor = 5.0e4;   // m, minimum East-West spacing

  /// Optional latitude/longitude box (deg) restricting candidate points.
  /// Empty box (lat_min >= lat_max) means the whole globe.
  double region_lat_min = 0.0;
  double region_lat_max = 0.0;
  double region_lon_min = 0.0;
  double region_lon_max = 0.0;

  bool has_region() const { return region_lat_min < region_lat_max && region_lon_min < region_lon_max; }
  bool in_region(double lat_deg, double lon_deg) const;
  void validate() const;
};

struct GroundStation {
  int gs_id = 0;
  double lat = 0.0;  // rad
  double lon = 0.0;  // rad
  Vec3 pos_ecef;
};

/// Boolean land/water raster on a regular latitude-longitude grid. Row 0 is
/// the northernmost band [90 - res, 90); column 0 starts at longitude -180.
class LandMask {
 public:
  LandMask(double resolution_deg, std::vector<bool> cells);

  static LandMask all_land(double resolution_deg = 0.5);
  static LandMask all_water(double resolution_deg = 0.5);
  /// Land only inside the given box (deg), water elsewhere.
  static LandMask box(double lat_min, double lat_max, double lon_min, double lon_max,
                      double resolution_deg = 0.5);
  /// Reads the text raster: a "resolution_deg <r>" header, then one line of
  /// '0'/'1' characters per row. Throws std::runtime_error on malformed input.
  static LandMask load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  double resolution() const { return resolution_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const;

  bool land(int row, int col) const { return cells_[static_cast<std::size_t>(row) * cols_ + col]; }
  /// Whether the cell containing (lat, lon) in radians is land.
  bool is_land(double lat, double lon) const;
  std::pair<int, int> cell_of(double lat, double lon) const;
  /// Centre of a cell, radians.
  std::pair<double, double> cell_center(int row, int col) const;

 private:
  double resolution_;
  int rows_;
  int cols_;
  std::vector<bool> cells_;
};

/// East-West spacing at latitude `lat` (rad): max(floor, d_eq / cos^alpha(lat)).
/// At the poles the floor is returned.
double ew_spacing(double lat, double alpha, const LatticeSpec& spec);

/// Longitude step (rad) used within the row at latitude `lat`.
double longitude_step(double lat, double alpha, const LatticeSpec& spec);

struct LatticeRow {
  double lat = 0.0;        // rad
  double lon_step = 0.0;   // rad
  double lon_offset = 0.0; // rad
  std::vector<double> lons;  // candidate longitudes, rad, in [-pi, pi)
};

/// Candidate rows before any land test.
std::vector<LatticeRow> lattice_rows(const LatticeSpec& spec);

/// Builds the anisotropic triangular lattice and applies the land-snap rule.
/// Stations are numbered in generation order (south to north, west to east).
std::vector<GroundStation> generate_lattice(const LatticeSpec& spec, const LandMask& mask);

struct City {
  std::string name;
  double lat = 0.0;  // rad
  double lon = 0.0;  // rad
};

struct TrafficMatrix {
  std::vector<City> cities;
  std::vector<int> station_of_city;        // gs_id per city
  std::vector<std::pair<int, int>> pairs;  // city index pairs, i < j

  std::size_t pair_count() const { return pairs.size(); }
};

/// Maps each city to its great-circle-nearest station (ties go to the lower
/// gs_id). Throws std::invalid_argument for an empty station list.
TrafficMatrix map_cities(const std::vector<City>& cities, const std::vector<GroundStation>& stations);

/// Reads "name,lat_deg,lon_deg" rows (a header line is skipped if present).
std::vector<City> load_cities(const std::filesystem::path& path);

/// Writes "gs_id,lat_deg,lon_deg" rows.
void save_stations(const std::filesystem::path& path, const std::vector<GroundStation>& stations);

}  // namespace qbb::groundgrid
