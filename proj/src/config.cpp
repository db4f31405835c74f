#include "qbb/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#ifndef QBB_DEFAULT_DATA_DIR
#define QBB_DEFAULT_DATA_DIR "data"
#endif

namespace qbb::harness {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }

  const json* find(const std::string& name) {
    seen_.insert(name);
    auto it = j_.find(name);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& name, double& out) {
    if (const json* v = find(name)) out = as_number(*v, key(name));
  }

  void integer(const std::string& name, int& out) {
    if (const json* v = find(name)) out = as_int(*v, key(name));
  }

  void string(const std::string& name, std::string& out) {
    if (const json* v = find(name)) {
      if (!v->is_string()) throw ConfigError(key(name), "expected a string");
      out = v->get<std::string>();
    }
  }

  void numbers(const std::string& name, std::vector<double>& out) {
    if (const json* v = find(name)) {
      out.clear();
      if (v->is_array()) {
        for (std::size_t i = 0; i < v->size(); ++i) out.push_back(as_number((*v)[i], key(name)));
      } else {
        out.push_back(as_number(*v, key(name)));
      }
    }
  }

  void integers(const std::string& name, std::vector<int>& out) {
    if (const json* v = find(name)) {
      out.clear();
      if (v->is_array()) {
        for (std::size_t i = 0; i < v->size(); ++i) out.push_back(as_int((*v)[i], key(name)));
      } else {
        out.push_back(as_int(*v, key(name)));
      }
    }
  }

  void strings(const std::string& name, std::vector<std::string>& out) {
    if (const json* v = find(name)) {
      out.clear();
      const auto take = [&](const json& x) {
        if (!x.is_string()) throw ConfigError(key(name), "expected a string");
        out.push_back(x.get<std::string>());
      };
      if (v->is_array()) {
        for (const auto& x : *v) take(x);
      } else {
        take(*v);
      }
    }
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(key(k), "unknown key");
    }
  }

 private:
  static double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
  }
  static int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<int>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

template <typename T, typename Pred>
void require_each(const std::vector<T>& xs, const std::string& key, Pred ok, const std::string& message) {
  require(!xs.empty(), key, "sweep list must not be empty");
  for (const auto& x : xs) require(ok(x), key, message);
}

std::string resolve_relative(const std::string& spec, const std::filesystem::path& base) {
  if (spec.rfind("builtin:", 0) == 0 || spec == "all-land" || spec.empty()) return spec;
  std::filesystem::path p(spec);
  if (p.is_relative() && !base.empty()) p = base / p;
  return std::filesystem::absolute(p).lexically_normal().string();
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.clock.dt_s > 0.0, "clock.dt_s", "must be positive");
  require(c.clock.horizon_s > 0.0, "clock.horizon_s", "must be positive");
  {
    const double r = c.clock.horizon_s / c.clock.dt_s;
    require(std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r) && std::round(r) >= 1.0, "clock.horizon_s",
            "must be a positive integer multiple of clock.dt_s");
  }
  require(std::isfinite(c.clock.t_start_s), "clock.t_start_s", "must be finite");

  require(c.lattice.d_eq_km > 0.0 && c.lattice.d_eq_km <= 5000.0, "lattice.d_eq_km", "must lie in (0, 5000]");
  require_each(c.lattice.alpha, "lattice.alpha", [](double a) { return a >= -3.0 && a <= 3.0; },
               "values must lie in [-3, 3]");
  require(c.lattice.ns_step_deg > 0.0 && c.lattice.ns_step_deg <= 90.0, "lattice.ns_step_deg",
          "must lie in (0, 90]");
  require(c.lattice.snap_radius_km >= 0.0 && c.lattice.snap_radius_km <= 1000.0, "lattice.snap_radius_km",
          "must lie in [0, 1000]");
  require(c.lattice.spacing_floor_km > 0.0 && c.lattice.spacing_floor_km <= c.lattice.d_eq_km * 100.0,
          "lattice.spacing_floor_km", "must be positive");
  require(!c.lattice.landmask.empty(), "lattice.landmask", "must name a file, builtin:<name> or all-land");
  if (c.lattice.region) {
    const auto& r = *c.lattice.region;
    require(r.lat_min_deg >= -90.0 && r.lat_max_deg <= 90.0 && r.lat_min_deg < r.lat_max_deg, "lattice.region",
            "latitudes must satisfy -90 <= lat_min_deg < lat_max_deg <= 90");
    require(r.lon_min_deg >= -180.0 && r.lon_max_deg <= 180.0 && r.lon_min_deg < r.lon_max_deg, "lattice.region",
            "longitudes must satisfy -180 <= lon_min_deg < lon_max_deg <= 180");
  }

  require_each(c.constellation.altitude_km, "constellation.altitude_km",
               [](double h) { return h >= 200.0 && h <= 2000.0; }, "values must lie in [200, 2000] km");
  require_each(c.constellation.planes, "constellation.planes", [](int p) { return p >= 0 && p <= 1000; },
               "values must lie in [0, 1000]");
  require_each(c.constellation.sats_per_plane, "constellation.sats_per_plane",
               [](int s) { return s >= 0 && s <= 200; }, "values must lie in [0, 200]");
  require_each(c.constellation.polar_fraction, "constellation.polar_fraction",
               [](double f) { return f >= 0.0 && f <= 1.0; }, "values must lie in [0, 1]");
  require(c.constellation.primary_inclination_deg >= 0.0 && c.constellation.primary_inclination_deg <= 180.0,
          "constellation.primary_inclination_deg", "must lie in [0, 180]");
  require(c.constellation.polar_inclination_deg >= 0.0 && c.constellation.polar_inclination_deg <= 180.0,
          "constellation.polar_inclination_deg", "must lie in [0, 180]");
  require(std::isfinite(c.constellation.phase_stagger), "constellation.phase_stagger", "must be finite");

  require(!c.service.policies.empty(), "service.policies", "sweep list must not be empty");
  for (const auto& p : c.service.policies) {
    const bool ok = p == "BPC" || p == "MPC" ||
                    (p.size() == 4 && p.compare(0, 3, "MPC") == 0 && p[3] >= '3' && p[3] <= '7');
    require(ok, "service.policies", "unknown policy '" + p + "' (expected BPC, MPC or MPC3..MPC7)");
  }
  require(c.service.z_max_deg > 0.0 && c.service.z_max_deg < 90.0, "service.z_max_deg", "must lie in (0, 90)");

  require(c.optics.aperture_radius_m > 0.0, "optics.aperture_radius_m", "must be positive");
  require(c.optics.beam_waist_m > 0.0, "optics.beam_waist_m", "must be positive");
  require(c.optics.wavelength_nm > 0.0, "optics.wavelength_nm", "must be positive");
  require(c.optics.eta_zenith > 0.0 && c.optics.eta_zenith <= 1.0, "optics.eta_zenith", "must lie in (0, 1]");
  require(c.optics.source_rate_hz > 0.0, "optics.source_rate_hz", "must be positive");
  require(c.optics.rate_floor_hz > 0.0, "optics.rate_floor_hz", "must be positive");

  require(!c.traffic.cities.empty(), "traffic.cities", "must name a city file");

  require_each(c.analysis.thresholds, "analysis.thresholds", [](double t) { return t >= 0.0 && t <= 1.0; },
               "values must lie in [0, 1]");
  require_each(c.analysis.windows_s, "analysis.windows_s", [](double w) { return w >= 0.0 && std::isfinite(w); },
               "values must be finite and >= 0");
  require(c.analysis.phase_bins >= 0 && c.analysis.phase_bins <= 10000, "analysis.phase_bins",
          "must lie in [0, 10000]");
}

ScenarioConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  Section root(j, "");

  if (const json* v = root.find("clock")) {
    Section s(*v, "clock");
    s.number("t_start_s", c.clock.t_start_s);
    s.number("dt_s", c.clock.dt_s);
    s.number("horizon_s", c.clock.horizon_s);
    s.finish();
  }
  if (const json* v = root.find("lattice")) {
    Section s(*v, "lattice");
    s.number("d_eq_km", c.lattice.d_eq_km);
    s.numbers("alpha", c.lattice.alpha);
    s.number("ns_step_deg", c.lattice.ns_step_deg);
    s.number("snap_radius_km", c.lattice.snap_radius_km);
    s.number("spacing_floor_km", c.lattice.spacing_floor_km);
    s.string("landmask", c.lattice.landmask);
    if (const json* r = s.find("region"); r && !r->is_null()) {
      Section rs(*r, "lattice.region");
      Region reg;
      rs.number("lat_min_deg", reg.lat_min_deg);
      rs.number("lat_max_deg", reg.lat_max_deg);
      rs.number("lon_min_deg", reg.lon_min_deg);
      rs.number("lon_max_deg", reg.lon_max_deg);
      rs.finish();
      c.lattice.region = reg;
    }
    s.finish();
  }
  if (const json* v = root.find("constellation")) {
    Section s(*v, "constellation");
    s.numbers("altitude_km", c.constellation.altitude_km);
    s.integers("planes", c.constellation.planes);
    s.integers("sats_per_plane", c.constellation.sats_per_plane);
    s.numbers("polar_fraction", c.constellation.polar_fraction);
    s.number("primary_inclination_deg", c.constellation.primary_inclination_deg);
    s.number("polar_inclination_deg", c.constellation.polar_inclination_deg);
    s.number("phase_stagger", c.constellation.phase_stagger);
    s.finish();
  }
  if (const json* v = root.find("service")) {
    Section s(*v, "service");
    s.strings("policies", c.service.policies);
    s.number("z_max_deg", c.service.z_max_deg);
    s.finish();
  }
  if (const json* v = root.find("optics")) {
    Section s(*v, "optics");
    s.number("aperture_radius_m", c.optics.aperture_radius_m);
    s.number("beam_waist_m", c.optics.beam_waist_m);
    s.number("wavelength_nm", c.optics.wavelength_nm);
    s.number("eta_zenith", c.optics.eta_zenith);
    s.number("source_rate_hz", c.optics.source_rate_hz);
    s.number("rate_floor_hz", c.optics.rate_floor_hz);
    s.finish();
  }
  if (const json* v = root.find("traffic")) {
    Section s(*v, "traffic");
    s.string("cities", c.traffic.cities);
    s.finish();
  }
  if (const json* v = root.find("analysis")) {
    Section s(*v, "analysis");
    s.numbers("thresholds", c.analysis.thresholds);
    s.numbers("windows_s", c.analysis.windows_s);
    s.integer("phase_bins", c.analysis.phase_bins);
    s.finish();
  }
  root.finish();

  c.lattice.landmask = resolve_relative(c.lattice.landmask, base_dir);
  c.traffic.cities = resolve_relative(c.traffic.cities, base_dir);
  validate(c);
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["clock"] = {{"t_start_s", c.clock.t_start_s}, {"dt_s", c.clock.dt_s}, {"horizon_s", c.clock.horizon_s}};
  j["lattice"] = {{"d_eq_km", c.lattice.d_eq_km},
                  {"alpha", c.lattice.alpha},
                  {"ns_step_deg", c.lattice.ns_step_deg},
                  {"snap_radius_km", c.lattice.snap_radius_km},
                  {"spacing_floor_km", c.lattice.spacing_floor_km},
                  {"landmask", c.lattice.landmask},
                  {"region", nullptr}};
  if (c.lattice.region) {
    const auto& r = *c.lattice.region;
    j["lattice"]["region"] = {{"lat_min_deg", r.lat_min_deg},
                              {"lat_max_deg", r.lat_max_deg},
                              {"lon_min_deg", r.lon_min_deg},
                              {"lon_max_deg", r.lon_max_deg}};
  }
  j["constellation"] = {{"altitude_km", c.constellation.altitude_km},
                        {"planes", c.constellation.planes},
                        {"sats_per_plane", c.constellation.sats_per_plane},
                        {"polar_fraction", c.constellation.polar_fraction},
                        {"primary_inclination_deg", c.constellation.primary_inclination_deg},
                        {"polar_inclination_deg", c.constellation.polar_inclination_deg},
                        {"phase_stagger", c.constellation.phase_stagger}};
  j["service"] = {{"policies", c.service.policies}, {"z_max_deg", c.service.z_max_deg}};
  j["optics"] = {{"aperture_radius_m", c.optics.aperture_radius_m}, {"beam_waist_m", c.optics.beam_waist_m},
                 {"wavelength_nm", c.optics.wavelength_nm},         {"eta_zenith", c.optics.eta_zenith},
                 {"source_rate_hz", c.optics.source_rate_hz},       {"rate_floor_hz", c.optics.rate_floor_hz}};
  j["traffic"] = {{"cities", c.traffic.cities}};
  j["analysis"] = {{"thresholds", c.analysis.thresholds},
                   {"windows_s", c.analysis.windows_s},
                   {"phase_bins", c.analysis.phase_bins}};
  return j;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed config " + path.string() + ": " + e.what());
  }
  if (j.is_null()) j = json::object();
  return config_from_json(j, std::filesystem::absolute(path).parent_path());
}

void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file " + path.string());
  out << config_to_json(cfg).dump(2) << '\n';
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("QBB_DATA_DIR"); env && *env) return env;
  return QBB_DEFAULT_DATA_DIR;
}

std::filesystem::path resolve_data_path(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return data_dir() / spec.substr(8);
  return spec;
}

}  // namespace qbb::harness
