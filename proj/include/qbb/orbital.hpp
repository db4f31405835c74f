#pragma once

#include <cstddef>
#include <vector>

#include "qbb/geometry.hpp"

namespace qbb::orbital {

/// Uniform simulation time grid: epoch k sits at t_start + k * dt.
struct EpochClock {
  double t_start = 0.0;
  double dt = 1.0;
  double horizon = 14400.0;

  /// Number of epochs; throws std::invalid_argument when horizon is not a
  /// positive integer multiple of dt.
  std::size_t steps() const;
  double time_at(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
  void validate() const;
};

/// A group of circular orbital planes sharing altitude and inclination.
struct ShellSpec {
  double altitude = 500e3;       // m above the mean Earth radius
  double inclination = 0.0;      // rad
  int planes = 1;
  int sats_per_plane = 1;
  std::vector<double> raan_offsets;  // rad, one per plane; empty means uniform 2*pi*p/P
  double phase_stagger = 0.0;        // Walker-style inter-plane factor F

  double raan(int plane) const;
  /// Initial argument of latitude of satellite (plane, sat) at t_start.
  double initial_phase(int plane, int sat) const;
  std::size_t satellite_count() const {
    return static_cast<std::size_t>(planes) * static_cast<std::size_t>(sats_per_plane);
  }
  void validate() const;
};

struct ConstellationSpec {
  std::vector<ShellSpec> shells;
  std::size_t satellite_budget = 0;  // must equal the sum over shells
  double polar_fraction = 0.10;
  int terminals = 7;
  double source_rate = 1e8;  // attempts/s

  std::size_t satellite_count() const;
  std::size_t terminal_count() const { return satellite_count() * static_cast<std::size_t>(terminals); }
  void validate() const;
};

/// Builds a primary shell plus an optional secondary (polar) shell that takes
/// round(polar_fraction * planes) of the planes. All planes carry the same
/// number of satellites, so the total budget is planes * sats_per_plane.
ConstellationSpec make_dual_shell(double altitude, int planes, int sats_per_plane,
                                  double polar_fraction, int terminals,
                                  double primary_inclination = deg2rad(53.0),
                                  double polar_inclination = deg2rad(98.0),
                                  double phase_stagger = 0.0, double source_rate = 1e8);

struct SatState {
  int sat_id = 0;
  int shell = 0;
  Vec3 pos_eci;
  Vec3 pos_ecef;
};

struct Topocentric {
  double elevation = 0.0;  // rad
  double azimuth = 0.0;    // rad, clockwise from north in [0, 2*pi)
  double zenith = 0.0;     // rad, pi/2 - elevation
  double slant_range = 0.0;  // m
};

/// Circular-orbit mean motion (rad/s). Throws std::domain_error for altitude <= 0.
double mean_motion(double altitude);

double orbital_period(double altitude);

/// ECI position of satellite (plane, sat) of a shell, `elapsed` seconds after t_start.
Vec3 propagate_eci(const ShellSpec& shell, int plane, int sat, double elapsed);

/// Rotates an ECI vector into the Earth-fixed frame; the frames coincide at t_start.
Vec3 eci_to_ecef(const Vec3& pos_eci, double elapsed);

/// Look angles and range of a satellite seen from a ground station (both ECEF).
/// Throws std::domain_error when the two points coincide.
Topocentric topocentric(const Vec3& gs_ecef, const Vec3& sat_ecef);

/// Great-circle diameter of the region that sees a satellite at `altitude`
/// above `min_elevation`.
double footprint_diameter(double altitude, double min_elevation);

/// Earth-central half-angle of the same visibility cone.
double footprint_half_angle(double altitude, double min_elevation);

/// States of every satellite in shell order, plane-major, at `elapsed`.
std::vector<SatState> propagate_constellation(const ConstellationSpec& spec, double elapsed);

}  // namespace qbb::orbital
