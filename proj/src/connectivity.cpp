#include "qbb/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace qbb::connectivity {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), sizes_(n, 1), largest_(n > 0 ? 1 : 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int DisjointSets::find(int x) {
  auto i = static_cast<std::size_t>(x);
  while (parent_[i] != static_cast<int>(i)) {
    parent_[i] = parent_[static_cast<std::size_t>(parent_[i])];
    i = static_cast<std::size_t>(parent_[i]);
  }
  return static_cast<int>(i);
}

bool DisjointSets::unite(int a, int b) {
  int ra = find(a), rb = find(b);
  if (ra == rb) return false;
  if (sizes_[static_cast<std::size_t>(ra)] < sizes_[static_cast<std::size_t>(rb)]) std::swap(ra, rb);
  parent_[static_cast<std::size_t>(rb)] = ra;
  sizes_[static_cast<std::size_t>(ra)] += sizes_[static_cast<std::size_t>(rb)];
  largest_ = std::max(largest_, sizes_[static_cast<std::size_t>(ra)]);
  return true;
}

CityWeights::CityWeights(const groundgrid::TrafficMatrix& tm, std::size_t n_nodes)
    : cities_at_(n_nodes, 0), pair_count_(tm.pairs.size()) {
  for (int gs : tm.station_of_city) {
    if (gs < 0 || static_cast<std::size_t>(gs) >= n_nodes) {
      throw std::out_of_range("traffic matrix references an unknown station");
    }
    if (cities_at_[static_cast<std::size_t>(gs)]++ == 0) occupied_.push_back(gs);
  }
  std::sort(occupied_.begin(), occupied_.end());
}

double CityWeights::fraction(DisjointSets& sets) const {
  if (pair_count_ == 0) return 0.0;
  std::unordered_map<int, std::size_t> per_root;
  for (int gs : occupied_) per_root[sets.find(gs)] += cities_at_[static_cast<std::size_t>(gs)];
  std::size_t joined = 0;
  for (const auto& [root, c] : per_root) joined += c * (c - 1) / 2;
  return static_cast<double>(joined) / static_cast<double>(pair_count_);
}

DisjointSets components(std::span<const Edge> edges, std::size_t n_nodes) {
  DisjointSets sets(n_nodes);
  for (const auto& e : edges) sets.unite(e.u, e.v);
  return sets;
}

double lcc_fraction(const EpochGraph& graph, std::size_t n_nodes) {
  if (n_nodes == 0) throw std::invalid_argument("lcc_fraction: graph needs at least one node");
  auto sets = components(graph.edges, n_nodes);
  return static_cast<double>(sets.largest()) / static_cast<double>(n_nodes);
}

double city_fraction(const EpochGraph& graph, const groundgrid::TrafficMatrix& tm, std::size_t n_nodes) {
  auto sets = components(graph.edges, n_nodes);
  return CityWeights(tm, n_nodes).fraction(sets);
}

std::size_t window_steps(double w_max, double dt) {
  if (w_max < 0.0 || !(dt > 0.0)) throw std::invalid_argument("window length must be >= 0 and dt > 0");
  return static_cast<std::size_t>(std::floor(w_max / dt + 1e-9));
}

UnionWindow union_graph(std::span<const EpochGraph> trace, std::size_t start, double w_max, double dt) {
  UnionWindow out{start, w_max, {}};
  if (start >= trace.size()) return out;
  const std::size_t end = std::min(trace.size() - 1, start + window_steps(w_max, dt));
  std::vector<Edge> all;
  for (std::size_t k = start; k <= end; ++k) all.insert(all.end(), trace[k].edges.begin(), trace[k].edges.end());
  out.edges = service::merge_max(std::move(all));
  return out;
}

UnionSweeper::UnionSweeper(std::size_t epochs, double dt, std::span<const double> windows,
                           const groundgrid::TrafficMatrix& tm, std::size_t n_nodes)
    : n_nodes_(n_nodes), next_epoch_(epochs), weights_(tm, n_nodes), order_(windows.size()), steps_(windows.size()) {
  out_.windows.assign(windows.begin(), windows.end());
  out_.lcc.assign(windows.size(), std::vector<double>(epochs, 0.0));
  out_.city.assign(windows.size(), std::vector<double>(epochs, 0.0));
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return windows[a] < windows[b]; });
  for (std::size_t w = 0; w < windows.size(); ++w) steps_[w] = window_steps(windows[w], dt);
}

void UnionSweeper::touch(const Edge& e, std::size_t epoch) {
  const auto key = static_cast<std::uint64_t>(e.u) * n_nodes_ + static_cast<std::uint64_t>(e.v);
  auto [it, fresh] = slot_.try_emplace(key, static_cast<int>(u_.size()));
  const int i = it->second;
  const auto ui = static_cast<std::size_t>(i);
  if (fresh) {
    u_.push_back(e.u);
    v_.push_back(e.v);
    prev_.push_back(-1);
    next_.push_back(-1);
    seen_.push_back(epoch);
  } else {
    seen_[ui] = epoch;
    if (head_ == i) return;
    // unlink
    next_[static_cast<std::size_t>(prev_[ui])] = next_[ui];
    if (next_[ui] >= 0) prev_[static_cast<std::size_t>(next_[ui])] = prev_[ui];
  }
  prev_[ui] = -1;
  next_[ui] = head_;
  if (head_ >= 0) prev_[static_cast<std::size_t>(head_)] = i;
  head_ = i;
}

void UnionSweeper::push(std::size_t kk, std::span<const Edge> edges) {
  if (kk >= next_epoch_) throw std::logic_error("UnionSweeper: epochs must be pushed in decreasing order");
  next_epoch_ = kk;
  if (n_nodes_ == 0) return;
  for (const auto& e : edges) touch(e, kk);

  DisjointSets sets(n_nodes_);
  int cur = head_;
  for (std::size_t w : order_) {
    while (cur >= 0 && seen_[static_cast<std::size_t>(cur)] - kk <= steps_[w]) {
      sets.unite(u_[static_cast<std::size_t>(cur)], v_[static_cast<std::size_t>(cur)]);
      cur = next_[static_cast<std::size_t>(cur)];
    }
    out_.lcc[w][kk] = static_cast<double>(sets.largest()) / static_cast<double>(n_nodes_);
    out_.city[w][kk] = weights_.fraction(sets);
  }
}

UnionSweep union_sweep(std::span<const EpochGraph> trace, double dt, std::span<const double> windows,
                       const groundgrid::TrafficMatrix& tm, std::size_t n_nodes) {
  UnionSweeper sweeper(trace.size(), dt, windows, tm, n_nodes);
  for (std::size_t kk = trace.size(); kk-- > 0;) sweeper.push(kk, trace[kk].edges);
  return sweeper.take();
}

std::vector<bool> threshold_trace(std::span<const double> values, double theta) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("threshold must lie in [0, 1]");
  std::vector<bool> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] >= theta;
  return out;
}

}  // namespace qbb::connectivity
