// Helpers and brute-force oracles shared by the test programs.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qbb/groundgrid.hpp"
#include "qbb/orbital.hpp"
#include "qbb/service.hpp"

namespace qbb::testing {

inline groundgrid::GroundStation station(int id, double lat_deg, double lon_deg) {
  const double lat = deg2rad(lat_deg), lon = deg2rad(lon_deg);
  return {id, lat, lon, spherical_to_cartesian(lat, lon)};
}

inline orbital::SatState satellite_above(int id, double lat_deg, double lon_deg, double altitude) {
  orbital::SatState s;
  s.sat_id = id;
  s.pos_ecef = spherical_to_cartesian(deg2rad(lat_deg), deg2rad(lon_deg), kEarthRadius + altitude);
  s.pos_eci = s.pos_ecef;
  return s;
}

// Reachability by repeated relaxation over an adjacency matrix.
inline std::vector<std::vector<bool>> reachability(const std::vector<service::Edge>& edges, std::size_t n) {
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& e : edges) {
    reach[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = true;
    reach[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  return reach;
}

inline double oracle_lcc(const std::vector<service::Edge>& edges, std::size_t n) {
  const auto reach = reachability(edges, n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    best = std::max<std::size_t>(best, static_cast<std::size_t>(std::count(reach[i].begin(), reach[i].end(), true)));
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

inline double oracle_city(const std::vector<service::Edge>& edges, const groundgrid::TrafficMatrix& tm,
                          std::size_t n) {
  if (tm.pairs.empty()) return 0.0;
  const auto reach = reachability(edges, n);
  std::size_t ok = 0;
  for (const auto& [a, b] : tm.pairs) {
    const auto sa = static_cast<std::size_t>(tm.station_of_city[static_cast<std::size_t>(a)]);
    const auto sb = static_cast<std::size_t>(tm.station_of_city[static_cast<std::size_t>(b)]);
    if (reach[sa][sb]) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(tm.pairs.size());
}

}  // namespace qbb::testing
