#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qbb/groundgrid.hpp"
#include "qbb/linkmodel.hpp"
#include "qbb/orbital.hpp"

namespace qbb::service {

enum class PolicyKind { BPC, MPC };

/// How a satellite turns its service subset into ground-station links.
/// BPC always uses two terminals; MPC uses 3..7 in a hub-spoke-ring layout.
struct ServicePolicy {
  PolicyKind kind = PolicyKind::MPC;
  int terminals = 7;

  static ServicePolicy bpc() { return {PolicyKind::BPC, 2}; }
  static ServicePolicy mpc(int terminals) { return {PolicyKind::MPC, terminals}; }

  void validate() const;
  std::string label() const;  // "BPC" or "MPC7"
  bool operator==(const ServicePolicy&) const = default;
};

/// Parses "BPC", "MPC", or "MPC<T>". Throws std::invalid_argument.
ServicePolicy parse_policy(const std::string& text);

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 0.0;  // pairs/s

  bool operator==(const Edge&) const = default;
};

/// Feasible links at one epoch, sorted by (u, v) with no duplicates.
struct EpochGraph {
  std::size_t epoch = 0;
  std::vector<Edge> edges;
};

/// A ground station as seen from one satellite.
struct StationView {
  int gs_id = 0;
  orbital::Topocentric look;
  double efficiency = 0.0;  // single downlink efficiency
  Vec3 pos_ecef;
};

struct LinkStrengthSample {
  std::size_t epoch = 0;
  double strength = 0.0;  // mean active edge weight, 0 without edges
};

/// Stations with zenith <= z_max as seen from `sat_ecef`, in ascending gs_id.
std::vector<StationView> visible_stations(const Vec3& sat_ecef, std::span<const groundgrid::GroundStation> stations,
                                          double z_max, const linkmodel::OpticalParams& optics);

std::vector<int> visible_set(const Vec3& sat_ecef, std::span<const groundgrid::GroundStation> stations,
                             double z_max);

/// The `terminals` nearest visible stations by slant range (ties by gs_id).
/// The first element is the hub.
std::vector<StationView> service_subset(std::vector<StationView> visible, int terminals);

/// One edge for the (at most two) stations of a BPC subset, if feasible.
std::vector<Edge> induce_edges_bpc(std::span<const StationView> subset, const linkmodel::OpticalParams& optics);

/// Hub-spoke-ring edges for an MPC subset whose first element is the hub.
/// Ring order is the azimuth of each neighbour seen from the hub.
std::vector<Edge> induce_edges_mpc(std::span<const StationView> subset, const linkmodel::OpticalParams& optics);

/// Edges one satellite contributes under `policy`.
std::vector<Edge> satellite_edges(const Vec3& sat_ecef, std::span<const groundgrid::GroundStation> stations,
                                  const ServicePolicy& policy, const linkmodel::OpticalParams& optics,
                                  double z_max);

/// Sorts edges by (u, v) and keeps the maximum weight per pair.
std::vector<Edge> merge_max(std::vector<Edge> edges);

EpochGraph build_epoch_graph(std::span<const orbital::SatState> sats,
                             std::span<const groundgrid::GroundStation> stations, const ServicePolicy& policy,
                             const linkmodel::OpticalParams& optics, double z_max, std::size_t epoch = 0);

LinkStrengthSample epoch_link_strength(const EpochGraph& graph);

/// Trace-level average of per-epoch strengths (0 for an empty trace).
double mean_link_strength(std::span<const LinkStrengthSample> samples);

}  // namespace qbb::service
