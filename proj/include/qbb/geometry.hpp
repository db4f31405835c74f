#pragma once

#include <cmath>
#include <numbers>

namespace qbb {

inline constexpr double kEarthRadius = 6.371e6;          // m, spherical Earth
inline constexpr double kEarthMu = 3.986004418e14;       // m^3/s^2
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Point on a sphere of the given radius at geocentric latitude/longitude (radians).
inline Vec3 spherical_to_cartesian(double lat, double lon, double radius = kEarthRadius) {
  const double c = std::cos(lat);
  return {radius * c * std::cos(lon), radius * c * std::sin(lon), radius * std::sin(lat)};
}

/// Central angle between two points given by latitude/longitude (haversine form).
inline double central_angle(double lat1, double lon1, double lat2, double lon2) {
  const double s_lat = std::sin(0.5 * (lat2 - lat1));
  const double s_lon = std::sin(0.5 * (lon2 - lon1));
  const double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  return 2.0 * std::asin(std::sqrt(std::fmin(1.0, h)));
}

inline double great_circle_distance(double lat1, double lon1, double lat2, double lon2) {
  return kEarthRadius * central_angle(lat1, lon1, lat2, lon2);
}

/// Wrap an angle into [-pi, pi).
inline double wrap_pi(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - kPi;
}

}  // namespace qbb
