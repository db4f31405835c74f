#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <span>
#include <vector>

#include "qbb/groundgrid.hpp"
#include "qbb/service.hpp"

namespace qbb::connectivity {

using service::Edge;
using service::EpochGraph;

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  int find(int x);
  bool unite(int a, int b);
  std::size_t size_of(int x) { return sizes_[static_cast<std::size_t>(find(x))]; }
  std::size_t largest() const { return largest_; }
  std::size_t count() const { return parent_.size(); }

 private:
  std::vector<int> parent_;
  std::vector<std::size_t> sizes_;
  std::size_t largest_;
};

/// Number of city pairs each station would contribute, precomputed from a
/// traffic matrix so per-epoch city fractions cost O(stations).
class CityWeights {
 public:
  CityWeights(const groundgrid::TrafficMatrix& tm, std::size_t n_nodes);

  /// Fraction of city pairs whose stations share a set in `sets`.
  double fraction(DisjointSets& sets) const;
  std::size_t pair_count() const { return pair_count_; }

 private:
  std::vector<std::size_t> cities_at_;
  std::vector<int> occupied_;
  std::size_t pair_count_;
};

DisjointSets components(std::span<const Edge> edges, std::size_t n_nodes);

/// Largest connected component size over n_nodes, isolated nodes included.
double lcc_fraction(const EpochGraph& graph, std::size_t n_nodes);

/// Fraction of traffic-matrix city pairs joined by a path; cities mapped to the
/// same station always count as joined. Returns 0 when there are no pairs.
double city_fraction(const EpochGraph& graph, const groundgrid::TrafficMatrix& tm, std::size_t n_nodes);

/// Edges available somewhere in epochs [start, start + W_max/dt], truncated
/// at the end of the trace; each pair keeps its maximum weight.
struct UnionWindow {
  std::size_t start = 0;
  double w_max = 0.0;  // s
  std::vector<Edge> edges;
};

UnionWindow union_graph(std::span<const EpochGraph> trace, std::size_t start, double w_max, double dt);

/// Number of epochs after `start` that a window of w_max seconds reaches.
std::size_t window_steps(double w_max, double dt);

/// Union-window connectivity for every start epoch and every window length.
/// Result [w][k] is the metric of the union graph over window w starting at k.
struct UnionSweep {
  std::vector<double> windows;                 // s, as given
  std::vector<std::vector<double>> lcc;        // [window][start]
  std::vector<std::vector<double>> city;       // [window][start]
};

UnionSweep union_sweep(std::span<const EpochGraph> trace, double dt, std::span<const double> windows,
                       const groundgrid::TrafficMatrix& tm, std::size_t n_nodes);

/// Streaming form of union_sweep. Epoch graphs are pushed in strictly
/// decreasing epoch order, so only the most recent sighting of each station
/// pair is kept instead of the whole trace.
class UnionSweeper {
 public:
  UnionSweeper(std::size_t epochs, double dt, std::span<const double> windows, const groundgrid::TrafficMatrix& tm,
               std::size_t n_nodes);

  void push(std::size_t epoch, std::span<const Edge> edges);
  UnionSweep take() { return std::move(out_); }

 private:
  void touch(const Edge& e, std::size_t epoch);

  std::size_t n_nodes_;
  std::size_t next_epoch_;  // epochs must arrive below this
  CityWeights weights_;
  std::vector<std::size_t> order_;  // windows by increasing length
  std::vector<std::size_t> steps_;
  UnionSweep out_;

  // Pairs in a move-to-front list, which keeps them sorted by last sighting.
  std::unordered_map<std::uint64_t, int> slot_;
  std::vector<int> u_, v_, prev_, next_;
  std::vector<std::size_t> seen_;
  int head_ = -1;
};

/// 1 where value >= theta.
std::vector<bool> threshold_trace(std::span<const double> values, double theta);

/// Per-epoch connectivity time series of one scenario.
struct ConnectivityTrace {
  std::vector<double> lcc_fraction;
  std::vector<double> city_fraction;
  std::vector<double> strength;

  std::size_t size() const { return lcc_fraction.size(); }
};

}  // namespace qbb::connectivity
