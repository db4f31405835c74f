#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "qbb/service.hpp"
#include "test_util.hpp"

using namespace qbb;
using namespace qbb::service;
using qbb::testing::satellite_above;
using qbb::testing::station;

namespace {

const double kZmax = deg2rad(57.0);

// Zenith angle from the angle between the line of sight and the local vertical.
double zenith_oracle(const Vec3& gs, const Vec3& sat) {
  const Vec3 los = sat - gs;
  return std::acos(std::clamp(dot(los, gs) / (norm(los) * norm(gs)), -1.0, 1.0));
}

// Great-circle initial bearing from a to b, clockwise from north.
double bearing(const groundgrid::GroundStation& a, const groundgrid::GroundStation& b) {
  const double dl = b.lon - a.lon;
  double t = std::atan2(std::sin(dl) * std::cos(b.lat),
                        std::cos(a.lat) * std::sin(b.lat) - std::sin(a.lat) * std::cos(b.lat) * std::cos(dl));
  if (t < 0.0) t += kTwoPi;
  return t;
}

std::set<std::pair<int, int>> pairs_of(const std::vector<Edge>& edges) {
  std::set<std::pair<int, int>> s;
  for (const auto& e : edges) s.insert({e.u, e.v});
  return s;
}

// Expected hub-spoke-ring edge set derived directly from station geometry.
std::set<std::pair<int, int>> mpc_oracle(const Vec3& sat, const std::vector<groundgrid::GroundStation>& st,
                                         int terminals) {
  std::vector<std::pair<double, int>> vis;
  for (const auto& g : st) {
    if (zenith_oracle(g.pos_ecef, sat) <= kZmax) vis.push_back({norm(sat - g.pos_ecef), g.gs_id});
  }
  std::sort(vis.begin(), vis.end());
  if (vis.size() > static_cast<std::size_t>(terminals)) vis.resize(static_cast<std::size_t>(terminals));
  std::set<std::pair<int, int>> out;
  if (vis.size() < 2) return out;
  const auto& hub = st[static_cast<std::size_t>(vis[0].second)];
  std::vector<std::pair<double, int>> ring;
  for (std::size_t i = 1; i < vis.size(); ++i) {
    const int id = vis[i].second;
    out.insert({std::min(hub.gs_id, id), std::max(hub.gs_id, id)});
    ring.push_back({bearing(hub, st[static_cast<std::size_t>(id)]), id});
  }
  std::sort(ring.begin(), ring.end());
  const std::size_t m = ring.size();
  const std::size_t ring_edges = m == 2 ? 1 : (m >= 3 ? m : 0);
  for (std::size_t i = 0; i < ring_edges; ++i) {
    const int a = ring[i].second, b = ring[(i + 1) % m].second;
    out.insert({std::min(a, b), std::max(a, b)});
  }
  return out;
}

std::vector<groundgrid::GroundStation> random_cluster(std::mt19937_64& rng, int n, double spread_deg) {
  std::uniform_real_distribution<double> d(-spread_deg, spread_deg);
  std::vector<groundgrid::GroundStation> st;
  for (int i = 0; i < n; ++i) st.push_back(station(i, 45.0 + d(rng), 10.0 + d(rng)));
  return st;
}

}  // namespace

TEST_CASE("policy parsing and labels") {
  CHECK(parse_policy("BPC") == ServicePolicy::bpc());
  CHECK(parse_policy("MPC") == ServicePolicy::mpc(7));
  CHECK(parse_policy("MPC5").terminals == 5);
  CHECK(parse_policy("MPC5").label() == "MPC5");
  CHECK(ServicePolicy::bpc().label() == "BPC");
  CHECK_THROWS_AS(parse_policy("MPC2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy("MPC8"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy("XYZ"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy("MPCx"), std::invalid_argument);
  CHECK_THROWS_AS((ServicePolicy{PolicyKind::BPC, 3}.validate()), std::invalid_argument);
}

TEST_CASE("visibility matches a zenith-angle oracle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lat(-60.0, 60.0), lon(-180.0, 180.0);
  std::vector<groundgrid::GroundStation> st;
  for (int i = 0; i < 400; ++i) st.push_back(station(i, lat(rng), lon(rng)));
  for (int s = 0; s < 30; ++s) {
    const auto sat = satellite_above(0, lat(rng), lon(rng), 700e3);
    std::vector<int> want;
    for (const auto& g : st) {
      if (zenith_oracle(g.pos_ecef, sat.pos_ecef) <= kZmax) want.push_back(g.gs_id);
    }
    CHECK(visible_set(sat.pos_ecef, st, kZmax) == want);
  }
}

TEST_CASE("visibility boundary is closed and z_max is validated") {
  const auto g = station(0, 0.0, 0.0);
  const std::vector<groundgrid::GroundStation> st{g};
  // Put the satellite so that the zenith angle is exactly 40 degrees, then
  // use z_max slightly above and below it.
  const double z = deg2rad(40.0);
  const double h = 700e3, a = kEarthRadius + h;
  const double nadir = std::asin(kEarthRadius * std::sin(kPi - z) / a);
  const double psi = z - nadir;
  const auto sat = satellite_above(0, 0.0, rad2deg(psi), h);
  const double exact = orbital::topocentric(g.pos_ecef, sat.pos_ecef).zenith;
  CHECK(exact == doctest::Approx(z));
  CHECK(visible_set(sat.pos_ecef, st, exact).size() == 1);
  CHECK(visible_set(sat.pos_ecef, st, exact - 1e-9).empty());
  CHECK_THROWS_AS(visible_set(sat.pos_ecef, st, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(visible_set(sat.pos_ecef, st, 0.5 * kPi), std::invalid_argument);
}

TEST_CASE("service subset takes the nearest stations, hub first") {
  std::vector<groundgrid::GroundStation> st;
  for (int i = 0; i < 10; ++i) st.push_back(station(i, 0.3 * i, 0.0));
  const auto sat = satellite_above(0, 0.0, 0.0, 700e3);
  const auto vis = visible_stations(sat.pos_ecef, st, kZmax, {});
  REQUIRE(vis.size() == 10);
  const auto sub = service_subset(vis, 4);
  REQUIRE(sub.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(sub[static_cast<std::size_t>(i)].gs_id == i);
  CHECK(service_subset(vis, 20).size() == 10);
  CHECK_THROWS_AS(service_subset(vis, 1), std::invalid_argument);
}

TEST_CASE("range ties are broken by gs_id") {
  // Two stations mirrored about the sub-satellite point are equidistant.
  const std::vector<groundgrid::GroundStation> st{station(0, 0.0, 1.0), station(1, 0.0, -1.0),
                                                  station(2, 1.5, 0.0)};
  const auto sat = satellite_above(0, 0.0, 0.0, 700e3);
  const auto sub = service_subset(visible_stations(sat.pos_ecef, st, kZmax, {}), 2);
  REQUIRE(sub.size() == 2);
  CHECK(sub[0].gs_id == 0);
  CHECK(sub[1].gs_id == 1);
}

TEST_CASE("hexagon: BPC single pair, MPC7 reaches the 12-edge budget") {
  // Hub at the sub-satellite point with six neighbours on a ring.
  std::vector<groundgrid::GroundStation> st{station(0, 0.0, 0.0)};
  for (int i = 0; i < 6; ++i) {
    const double ang = deg2rad(60.0 * i);
    st.push_back(station(i + 1, 2.0 * std::cos(ang), 2.0 * std::sin(ang)));
  }
  const auto sat = satellite_above(0, 0.0, 0.0, 700e3);
  const linkmodel::OpticalParams optics;

  const auto mpc = satellite_edges(sat.pos_ecef, st, ServicePolicy::mpc(7), optics, kZmax);
  CHECK(mpc.size() == 12);
  CHECK(pairs_of(mpc) == mpc_oracle(sat.pos_ecef, st, 7));
  int hub_degree = 0;
  for (const auto& e : mpc) hub_degree += (e.u == 0 || e.v == 0) ? 1 : 0;
  CHECK(hub_degree == 6);

  const auto bpc = satellite_edges(sat.pos_ecef, st, ServicePolicy::bpc(), optics, kZmax);
  REQUIRE(bpc.size() == 1);
  CHECK(bpc[0].u == 0);

  for (const auto& e : mpc) {
    CHECK(e.u < e.v);
    CHECK(e.weight > 0.0);
  }
}

TEST_CASE("small subsets: two spokes add one ring edge, one spoke none") {
  const auto sat = satellite_above(0, 0.0, 0.0, 700e3);
  const linkmodel::OpticalParams optics;
  const std::vector<groundgrid::GroundStation> two{station(0, 0.0, 0.0), station(1, 1.0, 0.0)};
  CHECK(satellite_edges(sat.pos_ecef, two, ServicePolicy::mpc(7), optics, kZmax).size() == 1);
  const std::vector<groundgrid::GroundStation> three{station(0, 0.0, 0.0), station(1, 1.0, 0.0),
                                                     station(2, -1.0, 0.5)};
  CHECK(satellite_edges(sat.pos_ecef, three, ServicePolicy::mpc(7), optics, kZmax).size() == 3);
  const std::vector<groundgrid::GroundStation> one{station(0, 0.0, 0.0)};
  CHECK(satellite_edges(sat.pos_ecef, one, ServicePolicy::mpc(7), optics, kZmax).empty());
  CHECK(satellite_edges(sat.pos_ecef, one, ServicePolicy::bpc(), optics, kZmax).empty());
}

TEST_CASE("rate floor removes infeasible edges") {
  const auto sat = satellite_above(0, 0.0, 0.0, 700e3);
  const std::vector<groundgrid::GroundStation> st{station(0, 0.0, 0.0), station(1, 1.0, 0.0)};
  linkmodel::OpticalParams optics;
  const auto e = satellite_edges(sat.pos_ecef, st, ServicePolicy::bpc(), optics, kZmax);
  REQUIRE(e.size() == 1);
  optics.rate_floor = e[0].weight * 1.000001;
  CHECK(satellite_edges(sat.pos_ecef, st, ServicePolicy::bpc(), optics, kZmax).empty());
  optics.rate_floor = e[0].weight;
  CHECK(satellite_edges(sat.pos_ecef, st, ServicePolicy::bpc(), optics, kZmax).size() == 1);
}

TEST_CASE("MPC matches the geometric oracle and respects the edge budget (property)") {
  std::mt19937_64 rng(99);
  const linkmodel::OpticalParams optics;
  std::uniform_int_distribution<int> count(1, 14);
  std::uniform_real_distribution<double> off(-4.0, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto st = random_cluster(rng, count(rng), 6.0);
    const auto sat = satellite_above(0, 45.0 + off(rng), 10.0 + off(rng), 700e3);
    for (int T = 3; T <= 7; ++T) {
      const auto mpc = satellite_edges(sat.pos_ecef, st, ServicePolicy::mpc(T), optics, kZmax);
      CHECK(mpc.size() <= static_cast<std::size_t>(2 * (T - 1)));
      CHECK(pairs_of(mpc) == mpc_oracle(sat.pos_ecef, st, T));
      // Every BPC edge of the same satellite is also an MPC edge.
      const auto bpc = satellite_edges(sat.pos_ecef, st, ServicePolicy::bpc(), optics, kZmax);
      const auto ps = pairs_of(mpc);
      for (const auto& e : bpc) CHECK(ps.count({e.u, e.v}) == 1);
    }
  }
}

TEST_CASE("merge_max keeps one edge per pair with the maximum weight") {
  std::vector<Edge> e{{1, 2, 5.0}, {0, 1, 1.0}, {1, 2, 7.0}, {0, 1, 3.0}, {2, 3, 4.0}, {1, 2, 6.0}};
  const auto m = merge_max(e);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == Edge{0, 1, 3.0});
  CHECK(m[1] == Edge{1, 2, 7.0});
  CHECK(m[2] == Edge{2, 3, 4.0});
  CHECK(merge_max({}).empty());

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> node(0, 5);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Edge> in;
    std::map<std::pair<int, int>, double> best;
    for (int i = 0; i < 20; ++i) {
      int a = node(rng), b = node(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      const double x = w(rng);
      in.push_back({a, b, x});
      auto [it, fresh] = best.try_emplace({a, b}, x);
      if (!fresh) it->second = std::max(it->second, x);
    }
    const auto out = merge_max(in);
    REQUIRE(out.size() == best.size());
    std::size_t i = 0;
    for (const auto& [k, v] : best) {
      CHECK(out[i].u == k.first);
      CHECK(out[i].v == k.second);
      CHECK(out[i].weight == v);
      ++i;
    }
  }
}

TEST_CASE("epoch graph merges satellites and is order independent") {
  std::vector<groundgrid::GroundStation> st;
  for (int i = 0; i < 8; ++i) st.push_back(station(i, 0.8 * i, 0.5 * (i % 3)));
  std::vector<orbital::SatState> sats{satellite_above(0, 1.0, 0.0, 700e3), satellite_above(1, 3.0, 1.0, 700e3),
                                      satellite_above(2, 5.0, 0.5, 700e3)};
  const linkmodel::OpticalParams optics;
  const auto g = build_epoch_graph(sats, st, ServicePolicy::mpc(5), optics, kZmax, 42);
  CHECK(g.epoch == 42);
  CHECK(std::is_sorted(g.edges.begin(), g.edges.end(),
                       [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); }));
  std::reverse(sats.begin(), sats.end());
  const auto g2 = build_epoch_graph(sats, st, ServicePolicy::mpc(5), optics, kZmax, 42);
  CHECK(g.edges == g2.edges);
  CHECK(build_epoch_graph({}, st, ServicePolicy::bpc(), optics, kZmax).edges.empty());
}

TEST_CASE("link strength") {
  EpochGraph g{3, {{0, 1, 2.0}, {1, 2, 4.0}}};
  CHECK(epoch_link_strength(g).strength == doctest::Approx(3.0));
  CHECK(epoch_link_strength(EpochGraph{4, {}}).strength == 0.0);
  std::vector<LinkStrengthSample> s{{0, 3.0}, {1, 0.0}, {2, 6.0}};
  CHECK(mean_link_strength(s) == doctest::Approx(3.0));
  CHECK(mean_link_strength({}) == 0.0);
}
