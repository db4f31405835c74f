#include "qbb/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qbb::orbital {

std::size_t EpochClock::steps() const {
  validate();
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

void EpochClock::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("clock: dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("clock: horizon must be positive");
  const double ratio = horizon / dt;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, k)) {
    throw std::invalid_argument("clock: horizon must be an integer multiple of dt");
  }
}

double ShellSpec::raan(int plane) const {
  if (plane < 0 || plane >= planes) throw std::out_of_range("shell: plane index out of range");
  if (raan_offsets.empty()) return kTwoPi * plane / planes;
  return raan_offsets[static_cast<std::size_t>(plane)];
}

double ShellSpec::initial_phase(int plane, int sat) const {
  if (sat < 0 || sat >= sats_per_plane) throw std::out_of_range("shell: satellite index out of range");
  const double in_plane = kTwoPi * sat / sats_per_plane;
  const double stagger = kTwoPi * phase_stagger * plane / (static_cast<double>(planes) * sats_per_plane);
  return in_plane + stagger;
}

void ShellSpec::validate() const {
  if (!(altitude > 0.0)) throw std::invalid_argument("shell: altitude must be positive");
  if (inclination < 0.0 || inclination > kPi) throw std::invalid_argument("shell: inclination outside [0, pi]");
  if (planes < 0 || sats_per_plane < 0) throw std::invalid_argument("shell: negative plane or satellite count");
  if (!raan_offsets.empty()) {
    if (raan_offsets.size() != static_cast<std::size_t>(planes)) {
      throw std::invalid_argument("shell: raan_offsets must have one entry per plane");
    }
    for (double r : raan_offsets) {
      if (r < 0.0 || r >= kTwoPi) throw std::invalid_argument("shell: raan offset outside [0, 2pi)");
    }
  }
}

std::size_t ConstellationSpec::satellite_count() const {
  std::size_t n = 0;
  for (const auto& s : shells) n += s.satellite_count();
  return n;
}

void ConstellationSpec::validate() const {
  for (const auto& s : shells) s.validate();
  if (terminals < 2) throw std::invalid_argument("constellation: terminals must be >= 2");
  if (polar_fraction < 0.0 || polar_fraction > 1.0) {
    throw std::invalid_argument("constellation: polar_fraction outside [0, 1]");
  }
  if (!(source_rate > 0.0)) throw std::invalid_argument("constellation: source_rate must be positive");
  if (satellite_count() != satellite_budget) {
    throw std::invalid_argument("constellation: shells hold " + std::to_string(satellite_count()) +
                                " satellites but the budget is " + std::to_string(satellite_budget));
  }
}

ConstellationSpec make_dual_shell(double altitude, int planes, int sats_per_plane, double polar_fraction,
                                  int terminals, double primary_inclination, double polar_inclination,
                                  double phase_stagger, double source_rate) {
  ConstellationSpec spec;
  spec.polar_fraction = polar_fraction;
  spec.terminals = terminals;
  spec.source_rate = source_rate;
  spec.satellite_budget = static_cast<std::size_t>(std::max(planes, 0)) *
                          static_cast<std::size_t>(std::max(sats_per_plane, 0));

  const int polar_planes = static_cast<int>(std::lround(polar_fraction * planes));
  const int primary_planes = planes - polar_planes;
  if (primary_planes > 0) {
    spec.shells.push_back(ShellSpec{altitude, primary_inclination, primary_planes, sats_per_plane, {}, phase_stagger});
  }
  if (polar_planes > 0) {
    spec.shells.push_back(ShellSpec{altitude, polar_inclination, polar_planes, sats_per_plane, {}, phase_stagger});
  }
  return spec;
}

double mean_motion(double altitude) {
  if (!(altitude > 0.0)) throw std::domain_error("mean_motion: altitude must be positive");
  const double a = kEarthRadius + altitude;
  return std::sqrt(kEarthMu / (a * a * a));
}

double orbital_period(double altitude) { return kTwoPi / mean_motion(altitude); }

Vec3 propagate_eci(const ShellSpec& shell, int plane, int sat, double elapsed) {
  const double raan = shell.raan(plane);
  const double u = shell.initial_phase(plane, sat) + mean_motion(shell.altitude) * elapsed;
  const double r = kEarthRadius + shell.altitude;

  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(shell.inclination), si = std::sin(shell.inclination);
  return {r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * (su * si)};
}

Vec3 eci_to_ecef(const Vec3& pos_eci, double elapsed) {
  const double theta = kEarthRotationRate * elapsed;
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * pos_eci.x + s * pos_eci.y, -s * pos_eci.x + c * pos_eci.y, pos_eci.z};
}

Topocentric topocentric(const Vec3& gs_ecef, const Vec3& sat_ecef) {
  const Vec3 los = sat_ecef - gs_ecef;
  const double range = norm(los);
  const double r_gs = norm(gs_ecef);
  if (range == 0.0 || r_gs == 0.0) throw std::domain_error("topocentric: degenerate geometry");

  const double lat = std::asin(gs_ecef.z / r_gs);
  const double lon = std::atan2(gs_ecef.y, gs_ecef.x);
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);

  const Vec3 up{cl * co, cl * so, sl};
  const Vec3 east{-so, co, 0.0};
  const Vec3 north{-sl * co, -sl * so, cl};

  const double u = dot(los, up);
  const double e = dot(los, east);
  const double n = dot(los, north);

  Topocentric out;
  out.elevation = std::asin(std::clamp(u / range, -1.0, 1.0));
  out.zenith = 0.5 * kPi - out.elevation;
  double az = std::atan2(e, n);
  if (az < 0.0) az += kTwoPi;
  out.azimuth = az;
  out.slant_range = range;
  return out;
}

double footprint_half_angle(double altitude, double min_elevation) {
  const double ratio = kEarthRadius / (kEarthRadius + altitude);
  return std::acos(ratio * std::cos(min_elevation)) - min_elevation;
}

double footprint_diameter(double altitude, double min_elevation) {
  return 2.0 * kEarthRadius * footprint_half_angle(altitude, min_elevation);
}

std::vector<SatState> propagate_constellation(const ConstellationSpec& spec, double elapsed) {
  std::vector<SatState> out;
  out.reserve(spec.satellite_count());
  int id = 0;
  for (std::size_t sh = 0; sh < spec.shells.size(); ++sh) {
    const auto& shell = spec.shells[sh];
    for (int p = 0; p < shell.planes; ++p) {
      for (int s = 0; s < shell.sats_per_plane; ++s) {
        SatState st;
        st.sat_id = id++;
        st.shell = static_cast<int>(sh);
        st.pos_eci = propagate_eci(shell, p, s, elapsed);
        st.pos_ecef = eci_to_ecef(st.pos_eci, elapsed);
        out.push_back(st);
      }
    }
  }
  return out;
}

}  // namespace qbb::orbital
