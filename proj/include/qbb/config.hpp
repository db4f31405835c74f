#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbb::harness {

/// Validation failure; `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct Region {
  double lat_min_deg = 0.0;
  double lat_max_deg = 0.0;
  double lon_min_deg = 0.0;
  double lon_max_deg = 0.0;
  bool operator==(const Region&) const = default;
};

/// Declarative run description in file units (km, degrees, seconds).
/// Lists are sweep axes; every other field is shared by all scenarios.
struct ScenarioConfig {
  struct Clock {
    double t_start_s = 0.0;
    double dt_s = 1.0;
    double horizon_s = 14400.0;
    bool operator==(const Clock&) const = default;
  } clock;

  struct Lattice {
    double d_eq_km = 400.0;
    std::vector<double> alpha{0.8};
    double ns_step_deg = 3.6;
    double snap_radius_km = 100.0;
    double spacing_floor_km = 50.0;
    std::string landmask = "builtin:landmask_0p5.txt";
    std::optional<Region> region;
    bool operator==(const Lattice&) const = default;
  } lattice;

  struct Constellation {
    std::vector<double> altitude_km{500.0};
    std::vector<int> planes{360};
    std::vector<int> sats_per_plane{18};
    std::vector<double> polar_fraction{0.10};
    double primary_inclination_deg = 53.0;
    double polar_inclination_deg = 98.0;
    double phase_stagger = 0.0;
    bool operator==(const Constellation&) const = default;
  } constellation;

  struct Service {
    std::vector<std::string> policies{"MPC7"};
    double z_max_deg = 57.0;
    bool operator==(const Service&) const = default;
  } service;

  struct Optics {
    double aperture_radius_m = 0.5;
    double beam_waist_m = 0.10;
    double wavelength_nm = 810.0;
    double eta_zenith = 0.8;
    double source_rate_hz = 1e8;
    double rate_floor_hz = 1.0;
    bool operator==(const Optics&) const = default;
  } optics;

  struct Traffic {
    std::string cities = "builtin:cities120.csv";
    bool operator==(const Traffic&) const = default;
  } traffic;

  struct Analysis {
    std::vector<double> thresholds{0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> windows_s{1.0, 10.0, 60.0, 3600.0, 14400.0};
    int phase_bins = 0;
    bool operator==(const Analysis&) const = default;
  } analysis;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError naming the first invalid key.
void validate(const ScenarioConfig& cfg);

/// Parses and validates; omitted keys keep their defaults, unknown keys fail.
/// Relative data paths are resolved against `base_dir`.
ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ScenarioConfig& cfg);

ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

/// Directory holding the bundled land mask and city list. QBB_DATA_DIR in the
/// environment overrides the compiled-in location.
std::filesystem::path data_dir();

/// Resolves "builtin:<file>" against data_dir(); other strings are paths.
std::filesystem::path resolve_data_path(const std::string& spec);

}  // namespace qbb::harness
