#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbb/config.hpp"
#include "qbb/connectivity.hpp"
#include "qbb/groundgrid.hpp"
#include "qbb/service.hpp"
#include "qbb/stats.hpp"

namespace qbb::harness {

/// One point of the sweep grid.
struct Scenario {
  std::size_t index = 0;
  std::string id;  // e.g. "h700_P12_S8_f0.1_a1_MPC7"
  double altitude_km = 0.0;
  int planes = 0;
  int sats_per_plane = 0;
  double polar_fraction = 0.0;
  double alpha = 0.0;
  std::string policy;
};

struct SweepPlan {
  std::vector<Scenario> scenarios;
  std::vector<std::string> warnings;  // dropped duplicate sweep values
};

/// Cartesian product of the sweep lists in a fixed nesting order
/// (altitude, planes, sats/plane, polar fraction, alpha, policy).
SweepPlan enumerate_sweep(const ScenarioConfig& cfg);

/// Keeps scenarios whose id matches the ECMAScript regex `filter` (search).
std::vector<Scenario> filter_scenarios(const std::vector<Scenario>& scenarios, const std::string& filter);

/// Any failure inside a scenario, tagged with the scenario id.
class ScenarioFailure : public std::runtime_error {
 public:
  ScenarioFailure(std::string scenario_id, const std::string& what)
      : std::runtime_error("scenario " + scenario_id + ": " + what), id_(std::move(scenario_id)) {}
  const std::string& scenario_id() const { return id_; }

 private:
  std::string id_;
};

/// Land mask and city list shared by every scenario of a run.
struct SharedInputs {
  groundgrid::LandMask mask;
  std::vector<groundgrid::City> cities;  // already restricted to the region, if any
};

SharedInputs load_inputs(const ScenarioConfig& cfg);

groundgrid::LatticeSpec lattice_spec(const ScenarioConfig& cfg, double alpha);
linkmodel::OpticalParams optical_params(const ScenarioConfig& cfg);
orbital::EpochClock epoch_clock(const ScenarioConfig& cfg);

/// Wait statistics of one indicator "metric >= threshold".
struct ThresholdStats {
  std::string metric;  // "city" or "lcc"
  double threshold = 0.0;
  stats::WaitStats waits;
  std::optional<stats::AutocorrEstimate> run_autocorr;  // over down-run durations
};

/// Mean and autocorrelation summary of a per-epoch series.
struct SeriesStats {
  std::string metric;  // "city", "lcc" or "strength"
  double mean = 0.0;
  std::optional<stats::AutocorrEstimate> autocorr;
};

/// S-bar reported only if the city-metric time-to-connectivity at
/// `threshold` is within `w_max`.
struct ConditionedStrength {
  double threshold = 0.0;
  double w_max = 0.0;  // s
  double time_to_connectivity = 0.0;  // s, +inf when never reached
  std::optional<double> strength;     // pairs/s
};

/// Union-window metric averaged over start epochs, and the share of start
/// epochs whose union graph reaches each threshold.
struct UnionSummary {
  std::string metric;
  double w_max = 0.0;
  double mean = 0.0;
  std::vector<double> reached;  // per analysis threshold
};

struct PhaseTable {
  std::string metric;
  double threshold = 0.0;
  double period = 0.0;  // s
  std::vector<stats::PhaseBin> bins;
};

struct ScenarioResult {
  Scenario scenario;
  std::size_t stations = 0;
  std::size_t satellites = 0;
  std::size_t city_pairs = 0;
  std::vector<groundgrid::GroundStation> station_list;
  connectivity::ConnectivityTrace trace;
  std::vector<std::size_t> edge_count;
  std::vector<service::EpochGraph> graphs;  // filled only when edges are kept
  double mean_strength = 0.0;
  std::vector<SeriesStats> series;
  std::vector<ThresholdStats> thresholds;
  std::vector<ConditionedStrength> conditioned;
  std::vector<UnionSummary> unions;
  std::vector<PhaseTable> phases;
};

struct RunOptions {
  unsigned workers = 1;
  bool keep_edges = false;
};

/// Full pipeline for one scenario. Results do not depend on `workers`.
/// Throws ScenarioFailure.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const SharedInputs& inputs, const Scenario& scenario,
                            const RunOptions& options = {});

struct ResultBundle {
  ScenarioConfig config;
  std::vector<Scenario> scenarios;
  std::vector<ScenarioResult> results;
  std::vector<std::string> warnings;
  std::string scenario_filter;
};

/// Enumerates, filters and runs every scenario in order.
ResultBundle run_sweep(const ScenarioConfig& cfg, const std::string& scenario_filter = {},
                       const RunOptions& options = {});

}  // namespace qbb::harness
