#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qbb/connectivity.hpp"
#include "test_util.hpp"

using namespace qbb;
using namespace qbb::connectivity;
using qbb::testing::oracle_city;
using qbb::testing::oracle_lcc;

namespace {

groundgrid::TrafficMatrix traffic(std::vector<int> station_of_city) {
  groundgrid::TrafficMatrix tm;
  tm.station_of_city = std::move(station_of_city);
  const int n = static_cast<int>(tm.station_of_city.size());
  tm.cities.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) tm.pairs.emplace_back(i, j);
  return tm;
}

std::vector<Edge> random_edges(std::mt19937_64& rng, int n, int m) {
  std::uniform_int_distribution<int> node(0, n - 1);
  std::vector<Edge> e;
  for (int i = 0; i < m; ++i) {
    int a = node(rng), b = node(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    e.push_back({a, b, 1.0});
  }
  return service::merge_max(e);
}

}  // namespace

TEST_CASE("disjoint sets") {
  DisjointSets s(6);
  CHECK(s.largest() == 1);
  CHECK(s.unite(0, 1));
  CHECK(s.unite(2, 3));
  CHECK_FALSE(s.unite(1, 0));
  CHECK(s.unite(1, 3));
  CHECK(s.largest() == 4);
  CHECK(s.size_of(2) == 4);
  CHECK(s.find(0) == s.find(3));
  CHECK(s.find(4) != s.find(5));
  CHECK(DisjointSets(0).largest() == 0);
}

TEST_CASE("lcc and city fractions on a hand-made graph") {
  // Components {0,1,2}, {3,4}, {5}.
  EpochGraph g{0, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}}};
  CHECK(lcc_fraction(g, 6) == doctest::Approx(0.5));
  // Cities at stations 0, 2, 3, 5, 5: joined pairs (0,2) and the two at 5.
  const auto tm = traffic({0, 2, 3, 5, 5});
  CHECK(city_fraction(g, tm, 6) == doctest::Approx(2.0 / 10.0));
  CHECK_THROWS_AS(lcc_fraction(g, 0), std::invalid_argument);
  CHECK(city_fraction(g, traffic({1}), 6) == 0.0);
}

TEST_CASE("empty graph: isolated nodes") {
  EpochGraph g{0, {}};
  CHECK(lcc_fraction(g, 4) == doctest::Approx(0.25));
  CHECK(city_fraction(g, traffic({0, 1, 2}), 4) == 0.0);
  CHECK(city_fraction(g, traffic({1, 1}), 4) == 1.0);
}

TEST_CASE("fractions match an all-pairs reachability oracle (property)") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> nodes(1, 12), ecount(0, 20), cities(0, 8);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = nodes(rng);
    const auto edges = random_edges(rng, n, ecount(rng));
    std::uniform_int_distribution<int> at(0, n - 1);
    std::vector<int> soc;
    for (int c = cities(rng); c > 0; --c) soc.push_back(at(rng));
    const auto tm = traffic(soc);
    EpochGraph g{0, edges};
    CHECK(lcc_fraction(g, static_cast<std::size_t>(n)) == oracle_lcc(edges, static_cast<std::size_t>(n)));
    CHECK(city_fraction(g, tm, static_cast<std::size_t>(n)) ==
          doctest::Approx(oracle_city(edges, tm, static_cast<std::size_t>(n))));
  }
}

TEST_CASE("adding edges never lowers connectivity (property)") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 10;
    auto edges = random_edges(rng, n, 8);
    const auto tm = traffic({0, 3, 5, 7, 9});
    const double l0 = lcc_fraction({0, edges}, n), c0 = city_fraction({0, edges}, tm, n);
    auto more = random_edges(rng, n, 4);
    edges.insert(edges.end(), more.begin(), more.end());
    edges = service::merge_max(edges);
    CHECK(lcc_fraction({0, edges}, n) >= l0);
    CHECK(city_fraction({0, edges}, tm, n) >= c0);
  }
}

TEST_CASE("window steps and union graph") {
  CHECK(window_steps(0.0, 1.0) == 0);
  CHECK(window_steps(10.0, 1.0) == 10);
  CHECK(window_steps(10.0, 3.0) == 3);
  CHECK_THROWS_AS(window_steps(-1.0, 1.0), std::invalid_argument);

  std::vector<EpochGraph> trace{{0, {{0, 1, 1.0}}}, {1, {{1, 2, 2.0}, {0, 1, 5.0}}}, {2, {{2, 3, 1.0}}}};
  const auto u0 = union_graph(trace, 0, 1.0, 1.0);
  REQUIRE(u0.edges.size() == 2);
  CHECK(u0.edges[0] == Edge{0, 1, 5.0});
  const auto u_end = union_graph(trace, 2, 100.0, 1.0);  // truncated at trace end
  CHECK(u_end.edges.size() == 1);
  CHECK(union_graph(trace, 5, 1.0, 1.0).edges.empty());
}

TEST_CASE("union sweep matches explicit union graphs (property)") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 9;
    const std::size_t K = 30;
    std::vector<EpochGraph> trace;
    std::uniform_int_distribution<int> m(0, 3);
    for (std::size_t k = 0; k < K; ++k) trace.push_back({k, random_edges(rng, n, m(rng))});
    const auto tm = traffic({0, 2, 4, 6, 8, 8});
    const std::vector<double> windows{5.0, 0.0, 2.0, 40.0};
    const auto sweep = union_sweep(trace, 1.0, windows, tm, n);
    for (std::size_t w = 0; w < windows.size(); ++w) {
      for (std::size_t k = 0; k < K; ++k) {
        const auto u = union_graph(trace, k, windows[w], 1.0);
        REQUIRE(sweep.lcc[w][k] == oracle_lcc(u.edges, n));
        REQUIRE(sweep.city[w][k] == doctest::Approx(oracle_city(u.edges, tm, n)));
      }
    }
    // W = 0 reproduces the instantaneous metrics.
    for (std::size_t k = 0; k < K; ++k) CHECK(sweep.lcc[1][k] == lcc_fraction(trace[k], n));
  }
}

TEST_CASE("union sweep with a coarser time step") {
  std::vector<EpochGraph> trace{{0, {}}, {1, {}}, {2, {{0, 1, 1.0}}}};
  const std::vector<double> windows{19.0, 20.0};
  const auto s = union_sweep(trace, 10.0, windows, traffic({0, 1}), 2);
  CHECK(s.city[0][0] == 0.0);  // one step ahead only
  CHECK(s.city[1][0] == 1.0);  // two steps reach epoch 2
}

TEST_CASE("union sweeper rejects out-of-order epochs") {
  const std::vector<double> windows{1.0};
  const auto tm = traffic({0, 1});
  UnionSweeper s(3, 1.0, windows, tm, 2);
  s.push(2, {});
  CHECK_THROWS_AS(s.push(2, {}), std::logic_error);
}

TEST_CASE("threshold trace") {
  const std::vector<double> v{0.1, 0.5, 0.49999, 1.0};
  CHECK(threshold_trace(v, 0.5) == std::vector<bool>{false, true, false, true});
  CHECK(threshold_trace(v, 0.0) == std::vector<bool>{true, true, true, true});
  CHECK_THROWS_AS(threshold_trace(v, 1.5), std::invalid_argument);
}
