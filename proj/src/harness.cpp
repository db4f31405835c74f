#include "qbb/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <new>
#include <regex>
#include <thread>

#include "qbb/orbital.hpp"

namespace qbb::harness {

namespace {

std::string short_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <typename T>
std::vector<T> dedup(const std::vector<T>& xs, const std::string& key, std::vector<std::string>& warnings) {
  std::vector<T> out;
  for (const auto& x : xs) {
    if (std::find(out.begin(), out.end(), x) == out.end()) {
      out.push_back(x);
    } else {
      warnings.push_back("duplicate value in " + key + " ignored");
    }
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is handled
// by exactly one thread, so the result layout is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

constexpr std::size_t kChunkEpochs = 256;

struct EpochMetrics {
  double lcc = 0.0;
  double city = 0.0;
  double strength = 0.0;
};

}  // namespace

SweepPlan enumerate_sweep(const ScenarioConfig& cfg) {
  SweepPlan plan;
  auto& w = plan.warnings;
  const auto hs = dedup(cfg.constellation.altitude_km, "constellation.altitude_km", w);
  const auto ps = dedup(cfg.constellation.planes, "constellation.planes", w);
  const auto ss = dedup(cfg.constellation.sats_per_plane, "constellation.sats_per_plane", w);
  const auto fs = dedup(cfg.constellation.polar_fraction, "constellation.polar_fraction", w);
  const auto as = dedup(cfg.lattice.alpha, "lattice.alpha", w);

  // "MPC" and "MPC7" name the same policy, so compare parsed labels.
  std::vector<std::string> policies;
  for (const auto& p : cfg.service.policies) policies.push_back(service::parse_policy(p).label());
  policies = dedup(policies, "service.policies", w);

  for (double h : hs)
    for (int p : ps)
      for (int s : ss)
        for (double f : fs)
          for (double a : as)
            for (const auto& pol : policies) {
              Scenario sc;
              sc.index = plan.scenarios.size();
              sc.altitude_km = h;
              sc.planes = p;
              sc.sats_per_plane = s;
              sc.polar_fraction = f;
              sc.alpha = a;
              sc.policy = pol;
              sc.id = "h" + short_number(h) + "_P" + std::to_string(p) + "_S" + std::to_string(s) + "_f" +
                      short_number(f) + "_a" + short_number(a) + "_" + pol;
              plan.scenarios.push_back(std::move(sc));
            }
  return plan;
}

std::vector<Scenario> filter_scenarios(const std::vector<Scenario>& scenarios, const std::string& filter) {
  if (filter.empty()) return scenarios;
  std::regex re;
  try {
    re = std::regex(filter, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError("scenario-filter", std::string("invalid regular expression: ") + e.what());
  }
  std::vector<Scenario> out;
  for (const auto& s : scenarios) {
    if (std::regex_search(s.id, re)) out.push_back(s);
  }
  return out;
}

SharedInputs load_inputs(const ScenarioConfig& cfg) {
  const auto& spec = cfg.lattice.landmask;
  SharedInputs in{spec == "all-land" ? groundgrid::LandMask::all_land()
                                     : groundgrid::LandMask::load(resolve_data_path(spec)),
                  {}};
  auto cities = groundgrid::load_cities(resolve_data_path(cfg.traffic.cities));
  if (cfg.lattice.region) {
    const auto ls = lattice_spec(cfg, 0.0);
    for (auto& c : cities) {
      if (ls.in_region(rad2deg(c.lat), rad2deg(c.lon))) in.cities.push_back(std::move(c));
    }
  } else {
    in.cities = std::move(cities);
  }
  return in;
}

groundgrid::LatticeSpec lattice_spec(const ScenarioConfig& cfg, double alpha) {
  groundgrid::LatticeSpec s;
  s.d_eq = cfg.lattice.d_eq_km * 1e3;
  s.alpha = alpha;
  s.ns_step = cfg.lattice.ns_step_deg;
  s.snap_radius = cfg.lattice.snap_radius_km * 1e3;
  s.spacing_floor = cfg.lattice.spacing_floor_km * 1e3;
  if (cfg.lattice.region) {
    s.region_lat_min = cfg.lattice.region->lat_min_deg;
    s.region_lat_max = cfg.lattice.region->lat_max_deg;
    s.region_lon_min = cfg.lattice.region->lon_min_deg;
    s.region_lon_max = cfg.lattice.region->lon_max_deg;
  }
  return s;
}

linkmodel::OpticalParams optical_params(const ScenarioConfig& cfg) {
  linkmodel::OpticalParams p;
  p.aperture_radius = cfg.optics.aperture_radius_m;
  p.beam_waist = cfg.optics.beam_waist_m;
  p.wavelength = cfg.optics.wavelength_nm * 1e-9;
  p.eta_zenith = cfg.optics.eta_zenith;
  p.source_rate = cfg.optics.source_rate_hz;
  p.rate_floor = cfg.optics.rate_floor_hz;
  return p;
}

orbital::EpochClock epoch_clock(const ScenarioConfig& cfg) {
  return {cfg.clock.t_start_s, cfg.clock.dt_s, cfg.clock.horizon_s};
}

namespace {

ScenarioResult run_scenario_impl(const ScenarioConfig& cfg, const SharedInputs& inputs, const Scenario& sc,
                                 const RunOptions& options) {
  ScenarioResult r;
  r.scenario = sc;

  const auto optics = optical_params(cfg);
  optics.validate();
  const auto clock = epoch_clock(cfg);
  const std::size_t K = clock.steps();
  const double z_max = deg2rad(cfg.service.z_max_deg);
  const auto policy = service::parse_policy(sc.policy);

  r.station_list = groundgrid::generate_lattice(lattice_spec(cfg, sc.alpha), inputs.mask);
  const auto& stations = r.station_list;
  if (stations.empty()) throw std::runtime_error("the lattice produced no ground stations");
  const std::size_t n = stations.size();
  const auto tm = groundgrid::map_cities(inputs.cities, stations);
  const connectivity::CityWeights weights(tm, n);

  const auto constellation = orbital::make_dual_shell(
      sc.altitude_km * 1e3, sc.planes, sc.sats_per_plane, sc.polar_fraction, policy.terminals,
      deg2rad(cfg.constellation.primary_inclination_deg), deg2rad(cfg.constellation.polar_inclination_deg),
      cfg.constellation.phase_stagger, optics.source_rate);
  constellation.validate();

  r.stations = n;
  r.satellites = constellation.satellite_count();
  r.city_pairs = tm.pair_count();
  r.trace.lcc_fraction.assign(K, 0.0);
  r.trace.city_fraction.assign(K, 0.0);
  r.trace.strength.assign(K, 0.0);
  r.edge_count.assign(K, 0);
  if (options.keep_edges) r.graphs.resize(K);

  // Epochs are independent, so each chunk is built in parallel and then folded
  // into the union sweep newest first.
  connectivity::UnionSweeper sweeper(K, clock.dt, cfg.analysis.windows_s, tm, n);
  std::vector<service::EpochGraph> chunk;
  for (std::size_t end = K; end > 0;) {
    const std::size_t begin = end > kChunkEpochs ? end - kChunkEpochs : 0;
    chunk.assign(end - begin, {});
    parallel_for(end - begin, options.workers, [&](std::size_t i) {
      const std::size_t k = begin + i;
      const auto sats = orbital::propagate_constellation(constellation, static_cast<double>(k) * clock.dt);
      chunk[i] = service::build_epoch_graph(sats, stations, policy, optics, z_max, k);
      auto sets = connectivity::components(chunk[i].edges, n);
      r.trace.lcc_fraction[k] = static_cast<double>(sets.largest()) / static_cast<double>(n);
      r.trace.city_fraction[k] = weights.fraction(sets);
      r.trace.strength[k] = service::epoch_link_strength(chunk[i]).strength;
      r.edge_count[k] = chunk[i].edges.size();
    });
    for (std::size_t k = end; k-- > begin;) sweeper.push(k, chunk[k - begin].edges);
    if (options.keep_edges) {
      for (std::size_t k = begin; k < end; ++k) r.graphs[k] = std::move(chunk[k - begin]);
    }
    end = begin;
  }
  const auto unions = sweeper.take();

  const std::vector<std::pair<std::string, const std::vector<double>*>> metrics = {
      {"city", &r.trace.city_fraction}, {"lcc", &r.trace.lcc_fraction}};

  for (const auto& [name, values] : metrics) {
    for (double theta : cfg.analysis.thresholds) {
      const auto up = connectivity::threshold_trace(*values, theta);
      const auto runs = stats::extract_down_runs(up, clock.dt);
      const auto waits = stats::forward_waits(up, clock.dt);
      ThresholdStats ts{name, theta, stats::wait_summary(runs, waits),
                        stats::summarize_autocorrelation(runs.durations)};
      r.thresholds.push_back(std::move(ts));
      if (cfg.analysis.phase_bins > 0) {
        const double period = orbital::orbital_period(sc.altitude_km * 1e3);
        r.phases.push_back({name, theta, period,
                            stats::phase_binned_runs(runs, clock.t_start, clock.dt, period,
                                                     static_cast<std::size_t>(cfg.analysis.phase_bins))});
      }
    }
  }

  r.mean_strength = stats::mean(r.trace.strength);
  r.series.push_back({"city", stats::mean(r.trace.city_fraction),
                      stats::summarize_autocorrelation(r.trace.city_fraction)});
  r.series.push_back({"lcc", stats::mean(r.trace.lcc_fraction),
                      stats::summarize_autocorrelation(r.trace.lcc_fraction)});
  r.series.push_back({"strength", r.mean_strength, stats::summarize_autocorrelation(r.trace.strength)});

  for (const auto& ts : r.thresholds) {
    if (ts.metric != "city") continue;
    const double ttc = ts.waits.time_to_connectivity();
    for (double w : cfg.analysis.windows_s) {
      ConditionedStrength cs{ts.threshold, w, ttc, std::nullopt};
      if (ttc <= w) cs.strength = r.mean_strength;
      r.conditioned.push_back(cs);
    }
  }

  for (std::size_t w = 0; w < unions.windows.size(); ++w) {
    const std::vector<std::pair<std::string, const std::vector<double>*>> per = {{"city", &unions.city[w]},
                                                                                 {"lcc", &unions.lcc[w]}};
    for (const auto& [name, values] : per) {
      UnionSummary u{name, unions.windows[w], stats::mean(*values), {}};
      for (double theta : cfg.analysis.thresholds) {
        std::size_t hit = 0;
        for (double v : *values) hit += v >= theta ? 1 : 0;
        u.reached.push_back(values->empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(values->size()));
      }
      r.unions.push_back(std::move(u));
    }
  }
  return r;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const SharedInputs& inputs, const Scenario& scenario,
                            const RunOptions& options) {
  try {
    return run_scenario_impl(cfg, inputs, scenario, options);
  } catch (const ScenarioFailure&) {
    throw;
  } catch (const std::bad_alloc&) {
    throw ScenarioFailure(scenario.id, "out of memory");
  } catch (const std::exception& e) {
    throw ScenarioFailure(scenario.id, e.what());
  }
}

ResultBundle run_sweep(const ScenarioConfig& cfg, const std::string& scenario_filter, const RunOptions& options) {
  validate(cfg);
  ResultBundle b;
  b.config = cfg;
  b.scenario_filter = scenario_filter;
  auto plan = enumerate_sweep(cfg);
  b.warnings = std::move(plan.warnings);
  b.scenarios = filter_scenarios(plan.scenarios, scenario_filter);
  if (b.scenarios.empty()) return b;
  const auto inputs = load_inputs(cfg);
  for (const auto& sc : b.scenarios) b.results.push_back(run_scenario(cfg, inputs, sc, options));
  return b;
}

}  // namespace qbb::harness
