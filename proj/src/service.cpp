#include "qbb/service.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace qbb::service {

using groundgrid::GroundStation;
using linkmodel::OpticalParams;

void ServicePolicy::validate() const {
  if (kind == PolicyKind::BPC && terminals != 2) {
    throw std::invalid_argument("policy: BPC operates with exactly 2 terminals");
  }
  if (kind == PolicyKind::MPC && (terminals < 3 || terminals > 7)) {
    throw std::invalid_argument("policy: MPC needs between 3 and 7 terminals");
  }
}

std::string ServicePolicy::label() const {
  return kind == PolicyKind::BPC ? std::string("BPC") : "MPC" + std::to_string(terminals);
}

ServicePolicy parse_policy(const std::string& text) {
  if (text == "BPC") return ServicePolicy::bpc();
  if (text == "MPC") return ServicePolicy::mpc(7);
  if (text.size() > 3 && text.compare(0, 3, "MPC") == 0) {
    const std::string digits = text.substr(3);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
        digits.size() <= 2) {
      ServicePolicy p = ServicePolicy::mpc(std::stoi(digits));
      p.validate();
      return p;
    }
  }
  throw std::invalid_argument("unknown service policy '" + text + "' (expected BPC, MPC or MPC<T>)");
}

std::vector<StationView> visible_stations(const Vec3& sat_ecef, std::span<const GroundStation> stations,
                                          double z_max, const OpticalParams& optics) {
  if (!(z_max > 0.0 && z_max < 0.5 * kPi)) throw std::invalid_argument("z_max must lie in (0, pi/2)");
  std::vector<StationView> out;
  const double r_sat = norm(sat_ecef);
  const double altitude = r_sat - kEarthRadius;
  if (!(altitude > 0.0)) return out;

  // Coarse cone test on the central angle before the exact zenith check.
  const double psi = orbital::footprint_half_angle(altitude, 0.5 * kPi - z_max) + 1e-6;
  const double cos_psi = std::cos(std::min(psi, kPi));
  const Vec3 sat_unit = sat_ecef * (1.0 / r_sat);

  for (const auto& gs : stations) {
    if (dot(sat_unit, gs.pos_ecef) < cos_psi * norm(gs.pos_ecef)) continue;
    const auto look = orbital::topocentric(gs.pos_ecef, sat_ecef);
    if (look.elevation <= 0.0 || look.zenith > z_max) continue;
    StationView v;
    v.gs_id = gs.gs_id;
    v.look = look;
    v.efficiency = linkmodel::downlink_efficiency(look.slant_range, look.zenith, optics);
    v.pos_ecef = gs.pos_ecef;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.gs_id < b.gs_id; });
  return out;
}

std::vector<int> visible_set(const Vec3& sat_ecef, std::span<const GroundStation> stations, double z_max) {
  std::vector<int> ids;
  for (const auto& v : visible_stations(sat_ecef, stations, z_max, OpticalParams{})) ids.push_back(v.gs_id);
  return ids;
}

std::vector<StationView> service_subset(std::vector<StationView> visible, int terminals) {
  if (terminals < 2) throw std::invalid_argument("service_subset: terminals must be >= 2");
  const auto by_range = [](const StationView& a, const StationView& b) {
    return std::tie(a.look.slant_range, a.gs_id) < std::tie(b.look.slant_range, b.gs_id);
  };
  const auto keep = std::min(visible.size(), static_cast<std::size_t>(terminals));
  std::partial_sort(visible.begin(), visible.begin() + static_cast<std::ptrdiff_t>(keep), visible.end(), by_range);
  visible.resize(keep);
  return visible;
}

namespace {

void push_if_feasible(std::vector<Edge>& out, const StationView& a, const StationView& b, const OpticalParams& optics) {
  const auto r = linkmodel::pair_rate(a.efficiency, b.efficiency, optics);
  if (!r.feasible || a.gs_id == b.gs_id) return;
  out.push_back(Edge{std::min(a.gs_id, b.gs_id), std::max(a.gs_id, b.gs_id), r.rate});
}

}  // namespace

std::vector<Edge> induce_edges_bpc(std::span<const StationView> subset, const OpticalParams& optics) {
  if (subset.size() > 2) throw std::invalid_argument("induce_edges_bpc: BPC subsets hold at most 2 stations");
  std::vector<Edge> out;
  if (subset.size() == 2) push_if_feasible(out, subset[0], subset[1], optics);
  return out;
}

std::vector<Edge> induce_edges_mpc(std::span<const StationView> subset, const OpticalParams& optics) {
  std::vector<Edge> out;
  if (subset.size() < 2) return out;
  const StationView& hub = subset.front();

  struct Spoke {
    double azimuth;
    const StationView* view;
  };
  std::vector<Spoke> ring;
  ring.reserve(subset.size() - 1);
  for (const auto& v : subset.subspan(1)) {
    push_if_feasible(out, hub, v, optics);
    const double az = (v.pos_ecef == hub.pos_ecef) ? 0.0 : orbital::topocentric(hub.pos_ecef, v.pos_ecef).azimuth;
    ring.push_back({az, &v});
  }
  std::sort(ring.begin(), ring.end(), [](const Spoke& a, const Spoke& b) {
    return a.azimuth != b.azimuth ? a.azimuth < b.azimuth : a.view->gs_id < b.view->gs_id;
  });

  const std::size_t m = ring.size();
  if (m == 2) {
    push_if_feasible(out, *ring[0].view, *ring[1].view, optics);
  } else if (m >= 3) {
    for (std::size_t i = 0; i < m; ++i) push_if_feasible(out, *ring[i].view, *ring[(i + 1) % m].view, optics);
  }
  return out;
}

std::vector<Edge> satellite_edges(const Vec3& sat_ecef, std::span<const GroundStation> stations,
                                  const ServicePolicy& policy, const OpticalParams& optics, double z_max) {
  auto subset = service_subset(visible_stations(sat_ecef, stations, z_max, optics), policy.terminals);
  return policy.kind == PolicyKind::BPC ? induce_edges_bpc(subset, optics) : induce_edges_mpc(subset, optics);
}

std::vector<Edge> merge_max(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v, b.weight) < std::tie(b.u, b.v, a.weight);
  });
  auto last = std::unique(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v;
  });
  edges.erase(last, edges.end());
  return edges;
}

EpochGraph build_epoch_graph(std::span<const orbital::SatState> sats, std::span<const GroundStation> stations,
                             const ServicePolicy& policy, const OpticalParams& optics, double z_max,
                             std::size_t epoch) {
  policy.validate();
  std::vector<Edge> all;
  for (const auto& sat : sats) {
    auto e = satellite_edges(sat.pos_ecef, stations, policy, optics, z_max);
    all.insert(all.end(), e.begin(), e.end());
  }
  return EpochGraph{epoch, merge_max(std::move(all))};
}

LinkStrengthSample epoch_link_strength(const EpochGraph& graph) {
  LinkStrengthSample s{graph.epoch, 0.0};
  if (graph.edges.empty()) return s;
  double sum = 0.0;
  for (const auto& e : graph.edges) sum += e.weight;
  s.strength = sum / static_cast<double>(graph.edges.size());
  return s;
}

double mean_link_strength(std::span<const LinkStrengthSample> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.strength;
  return sum / static_cast<double>(samples.size());
}

}  // namespace qbb::service
