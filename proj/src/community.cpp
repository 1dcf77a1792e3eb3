// Copyright 2026 The casegraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "casegraph/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>

#include "casegraph/error.hpp"

namespace casegraph {

// ---------------------------------------------------------------- Partition

Partition Partition::from_labels(std::vector<std::string> node_ids, const std::vector<std::size_t>& labels) {
  if (node_ids.size() != labels.size()) {
    throw Error(ErrorCode::kPartitionMismatch, std::to_string(labels.size()) + " labels for " +
                                                   std::to_string(node_ids.size()) + " nodes");
  }
  Partition p;
  p.node_ids_ = std::move(node_ids);
  p.membership_.resize(labels.size());
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = renumber.emplace(labels[i], renumber.size());
    p.membership_[i] = it->second;
  }
  p.community_count_ = renumber.size();
  return p;
}

Partition Partition::singletons(std::vector<std::string> node_ids) {
  std::vector<std::size_t> labels(node_ids.size());
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(std::move(node_ids), labels);
}

std::size_t Partition::community_of(std::string_view id) const {
  auto it = std::lower_bound(node_ids_.begin(), node_ids_.end(), id);
  if (it == node_ids_.end() || *it != id) throw Error(ErrorCode::kUnknownNode, std::string(id));
  return membership_[static_cast<std::size_t>(it - node_ids_.begin())];
}

std::vector<std::vector<std::size_t>> Partition::communities() const {
  std::vector<std::vector<std::size_t>> out(community_count_);
  for (std::size_t i = 0; i < membership_.size(); ++i) out[membership_[i]].push_back(i);
  return out;
}

namespace {

void require_cover(const SimpleGraph& g, const Partition& p) {
  if (p.node_ids() != g.ids()) {
    throw Error(ErrorCode::kPartitionMismatch, "partition does not cover exactly the graph's nodes");
  }
}

double plogp(double x) { return x > 0 ? x * std::log2(x) : 0.0; }

// Deterministic across standard libraries: only the raw mt19937_64 stream is
// used, never std::shuffle or the std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[below(i)]);
    return order;
  }

 private:
  std::mt19937_64 engine_;
};

// Undirected weighted graph with explicit self-loop weights, used for the
// aggregated levels of Leiden and Infomap.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self_loop;
  std::vector<double> strength;  // sum of adj weights + 2 * self_loop
  double total = 0;              // sum of strengths (2m)

  std::size_t size() const { return adj.size(); }
};

WeightedGraph weighted_from(const SimpleGraph& g) {
  WeightedGraph w;
  const std::size_t n = g.node_count();
  w.adj.resize(n);
  w.self_loop.assign(n, 0.0);
  w.strength.assign(n, 0.0);
  for (auto [u, v] : g.edges()) {
    w.adj[u].emplace_back(v, 1.0);
    w.adj[v].emplace_back(u, 1.0);
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(w.adj[v].begin(), w.adj[v].end());
    w.strength[v] = static_cast<double>(w.adj[v].size());
    w.total += w.strength[v];
  }
  return w;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& membership, std::size_t count) {
  WeightedGraph out;
  out.adj.resize(count);
  out.self_loop.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> between;
  for (std::size_t u = 0; u < g.size(); ++u) {
    out.self_loop[membership[u]] += g.self_loop[u];
    for (auto [v, w] : g.adj[u]) {
      if (u >= v) continue;
      const std::size_t cu = membership[u], cv = membership[v];
      if (cu == cv) {
        out.self_loop[cu] += w;
      } else {
        between[{std::min(cu, cv), std::max(cu, cv)}] += w;
      }
    }
  }
  for (auto [key, w] : between) {
    out.adj[key.first].emplace_back(key.second, w);
    out.adj[key.second].emplace_back(key.first, w);
  }
  for (std::size_t c = 0; c < count; ++c) {
    std::sort(out.adj[c].begin(), out.adj[c].end());
    double s = 2.0 * out.self_loop[c];
    for (auto [v, w] : out.adj[c]) s += w;
    out.strength[c] = s;
    out.total += s;
  }
  return out;
}

// Renumbers labels to 0.. by first appearance; returns the count.
std::size_t compact(std::vector<std::size_t>& labels) {
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (auto& l : labels) l = renumber.emplace(l, renumber.size()).first->second;
  return renumber.size();
}

// Accumulates weights from v to each neighbouring community, in adjacency
// order of first contact.
class NeighborWeights {
 public:
  explicit NeighborWeights(std::size_t n) : weight_(n, 0.0), seen_(n, false) {}

  template <typename Label>
  void collect(const WeightedGraph& g, std::size_t v, Label&& label_of) {
    for (std::size_t c : touched_) {
      weight_[c] = 0.0;
      seen_[c] = false;
    }
    touched_.clear();
    for (auto [u, w] : g.adj[v]) {
      const std::size_t c = label_of(u);
      if (!seen_[c]) {
        seen_[c] = true;
        touched_.push_back(c);
      }
      weight_[c] += w;
    }
  }

  const std::vector<std::size_t>& touched() const { return touched_; }
  double weight(std::size_t c) const { return seen_[c] ? weight_[c] : 0.0; }

 private:
  std::vector<double> weight_;
  std::vector<bool> seen_;
  std::vector<std::size_t> touched_;
};

std::vector<std::size_t> connected_components(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> comp(n, n);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    comp[s] = next;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t w : g.neighbors(v)) {
        if (comp[w] == n) {
          comp[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace

double modularity(const SimpleGraph& graph, const Partition& partition, double resolution) {
  require_cover(graph, partition);
  const std::size_t m = graph.edge_count();
  if (m == 0) throw Error(ErrorCode::kNoEdges, "modularity needs at least one edge");
  std::vector<double> internal(partition.community_count(), 0.0), degree(partition.community_count(), 0.0);
  const auto& mem = partition.membership();
  for (auto [u, v] : graph.edges()) {
    if (mem[u] == mem[v]) internal[mem[u]] += 1.0;
  }
  for (std::size_t v = 0; v < graph.node_count(); ++v) degree[mem[v]] += static_cast<double>(graph.degree(v));
  const double md = static_cast<double>(m);
  double q = 0;
  for (std::size_t c = 0; c < partition.community_count(); ++c) {
    const double share = degree[c] / (2.0 * md);
    q += internal[c] / md - resolution * share * share;
  }
  return q;
}

// ----------------------------------------------------------- Girvan-Newman

namespace {

// Brandes edge betweenness on the current graph; values indexed like
// graph.edges().
std::vector<double> edge_betweenness(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> edge_index(n * n, 0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    auto [u, v] = g.edges()[i];
    edge_index[u * n + v] = edge_index[v * n + u] = i;
  }
  std::vector<double> eb(g.edge_count(), 0.0);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long long> dist(n);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    stack.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      stack.push_back(v);
      for (std::size_t w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    while (!stack.empty()) {
      const std::size_t w = stack.back();
      stack.pop_back();
      for (std::size_t v : preds[w]) {
        const double credit = sigma[v] / sigma[w] * (1.0 + delta[w]);
        eb[edge_index[v * n + w]] += credit;
        delta[v] += credit;
      }
    }
  }
  return eb;
}

}  // namespace

GirvanNewmanResult girvan_newman_dendrogram(const SimpleGraph& graph) {
  GirvanNewmanResult result;
  SimpleGraph current = graph;
  result.dendrogram.push_back(Partition::from_labels(graph.ids(), connected_components(current)));
  while (current.edge_count() > 0) {
    const auto eb = edge_betweenness(current);
    std::size_t pick = 0;
    for (std::size_t i = 1; i < eb.size(); ++i) {
      // Edges are sorted, so keeping the first maximum breaks ties by the
      // smallest endpoint pair.
      if (eb[i] > eb[pick] + 1e-9 * std::max(1.0, eb[pick])) pick = i;
    }
    auto edges = current.edges();
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(pick));
    current = SimpleGraph(graph.ids(), std::move(edges));
    result.dendrogram.push_back(Partition::from_labels(graph.ids(), connected_components(current)));
  }

  if (graph.edge_count() == 0) {
    result.best = result.dendrogram.front();
    return result;
  }
  for (const auto& p : result.dendrogram) result.modularity.push_back(modularity(graph, p));
  for (std::size_t i = 1; i < result.dendrogram.size(); ++i) {
    const double q = result.modularity[i], best = result.modularity[result.best_index];
    const bool better = q > best + 1e-12;
    const bool tie_fewer = std::abs(q - best) <= 1e-12 &&
                           result.dendrogram[i].community_count() <
                               result.dendrogram[result.best_index].community_count();
    if (better || tie_fewer) result.best_index = i;
  }
  result.best = result.dendrogram[result.best_index];
  return result;
}

Partition girvan_newman(const SimpleGraph& graph) { return girvan_newman_dendrogram(graph).best; }

Partition girvan_newman(const CausalGraph& graph) { return girvan_newman(undirected_projection(graph)); }

// ------------------------------------------------------------------ Leiden

namespace {

constexpr double kLeidenRandomness = 0.01;
constexpr double kGainTolerance = 1e-12;
constexpr int kMaxLevels = 100;

// Quality is modularity scaled by m: sum_c E_c - gamma * K_c^2 / (4m). Gains
// below are in the same units.
void leiden_move_nodes(const WeightedGraph& g, std::vector<std::size_t>& mem, double gamma, Rng& rng) {
  const std::size_t n = g.size();
  const double two_m = g.total;
  std::vector<double> community_strength(n, 0.0);
  std::vector<std::size_t> community_size(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    community_strength[mem[v]] += g.strength[v];
    ++community_size[mem[v]];
  }
  std::vector<std::size_t> empty;
  for (std::size_t c = n; c-- > 0;) {
    if (community_size[c] == 0) empty.push_back(c);
  }

  std::deque<std::size_t> queue;
  std::vector<bool> queued(n, true);
  for (std::size_t v : rng.permutation(n)) queue.push_back(v);
  NeighborWeights nw(n);

  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    queued[v] = false;
    const std::size_t current = mem[v];
    const double kv = g.strength[v];
    community_strength[current] -= kv;
    --community_size[current];

    nw.collect(g, v, [&](std::size_t u) { return mem[u]; });
    std::size_t best = current;
    double best_gain = nw.weight(current) - gamma * kv * community_strength[current] / two_m;
    for (std::size_t c : nw.touched()) {
      const double gain = nw.weight(c) - gamma * kv * community_strength[c] / two_m;
      if (gain > best_gain + kGainTolerance) {
        best = c;
        best_gain = gain;
      }
    }
    if (community_size[current] > 0 && !empty.empty() && 0.0 > best_gain + kGainTolerance) {
      best = empty.back();
    }

    if (best != current && !empty.empty() && best == empty.back()) empty.pop_back();
    mem[v] = best;
    community_strength[best] += kv;
    ++community_size[best];
    if (community_size[current] == 0 && best != current) empty.push_back(current);

    if (best != current) {
      for (auto [u, w] : g.adj[v]) {
        if (mem[u] != best && !queued[u]) {
          queued[u] = true;
          queue.push_back(u);
        }
      }
    }
  }
}

std::vector<std::size_t> leiden_refine(const WeightedGraph& g, const std::vector<std::size_t>& mem, double gamma,
                                       Rng& rng) {
  const std::size_t n = g.size();
  const double two_m = g.total;
  std::vector<std::size_t> ref(n);
  std::iota(ref.begin(), ref.end(), 0);
  std::vector<double> ref_strength = g.strength;
  std::vector<std::size_t> ref_size(n, 1);

  std::vector<double> parent_strength(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) parent_strength[mem[v]] += g.strength[v];

  // Weight from v to the rest of its parent community; also the initial
  // external weight of v's singleton within that community.
  std::vector<double> inside(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto [u, w] : g.adj[v]) {
      if (mem[u] == mem[v]) inside[v] += w;
    }
  }
  std::vector<double> external = inside;  // E(T, S - T) per refined community T

  NeighborWeights nw(n + 1);  // bucket n collects neighbours outside the parent
  for (std::size_t v : rng.permutation(n)) {
    if (ref_size[ref[v]] != 1) continue;
    const std::size_t parent = mem[v];
    const double kv = g.strength[v];
    if (inside[v] < gamma * kv * (parent_strength[parent] - kv) / two_m) continue;

    nw.collect(g, v, [&](std::size_t u) { return mem[u] == parent ? ref[u] : n; });
    std::vector<std::pair<std::size_t, double>> candidates = {{ref[v], 0.0}};
    for (std::size_t t : nw.touched()) {
      if (t == n || t == ref[v]) continue;
      const double kt = ref_strength[t];
      if (external[t] < gamma * kt * (parent_strength[parent] - kt) / two_m) continue;
      const double gain = nw.weight(t) - gamma * kv * kt / two_m;
      if (gain >= 0) candidates.emplace_back(t, gain);
    }

    double max_gain = 0;
    for (auto [t, gain] : candidates) max_gain = std::max(max_gain, gain);
    std::vector<double> weights;
    double total = 0;
    for (auto [t, gain] : candidates) {
      weights.push_back(std::exp((gain - max_gain) / kLeidenRandomness));
      total += weights.back();
    }
    double r = rng.uniform() * total;
    std::size_t chosen = candidates.size() - 1;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (r < weights[i]) {
        chosen = i;
        break;
      }
      r -= weights[i];
    }
    const std::size_t target = candidates[chosen].first;
    if (target == ref[v]) continue;

    const double w_vt = nw.weight(target);
    external[target] = external[target] - w_vt + (inside[v] - w_vt);
    ref_strength[ref[v]] -= kv;
    --ref_size[ref[v]];
    ref_strength[target] += kv;
    ++ref_size[target];
    ref[v] = target;
  }
  return ref;
}

}  // namespace

Partition leiden(const SimpleGraph& graph, double resolution, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (n == 0 || graph.edge_count() == 0) return Partition::singletons(graph.ids());
  Rng rng(seed);
  WeightedGraph g = weighted_from(graph);
  std::vector<std::size_t> node_of(n);  // original node -> current aggregate node
  std::iota(node_of.begin(), node_of.end(), 0);
  std::vector<std::size_t> mem(n);
  std::iota(mem.begin(), mem.end(), 0);

  for (int level = 0; level < kMaxLevels; ++level) {
    leiden_move_nodes(g, mem, resolution, rng);
    const std::size_t count = compact(mem);
    if (count == g.size()) break;

    std::vector<std::size_t> ref = leiden_refine(g, mem, resolution, rng);
    const std::size_t ref_count = compact(ref);
    std::vector<std::size_t> next_mem;
    if (ref_count < g.size()) {
      next_mem.assign(ref_count, 0);
      for (std::size_t v = 0; v < g.size(); ++v) next_mem[ref[v]] = mem[v];
      g = aggregate(g, ref, ref_count);
      for (auto& a : node_of) a = ref[a];
    } else {
      // Refinement merged nothing; aggregate on the moved partition instead
      // so every level shrinks the graph.
      next_mem.resize(count);
      std::iota(next_mem.begin(), next_mem.end(), 0);
      g = aggregate(g, mem, count);
      for (auto& a : node_of) a = mem[a];
    }
    mem = std::move(next_mem);
  }

  // Split any community that is disconnected in the original graph.
  std::vector<std::size_t> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = mem[node_of[v]];
  std::vector<std::size_t> split(n, n);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (split[s] != n) continue;
    split[s] = next;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t w : graph.neighbors(v)) {
        if (split[w] == n && labels[w] == labels[s]) {
          split[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return Partition::from_labels(graph.ids(), split);
}

Partition leiden(const CausalGraph& graph, double resolution, std::uint64_t seed) {
  return leiden(undirected_projection(graph), resolution, seed);
}

// ----------------------------------------------------------------- Infomap

double map_equation(const SimpleGraph& graph, const Partition& partition) {
  require_cover(graph, partition);
  if (graph.edge_count() == 0) throw Error(ErrorCode::kNoEdges, "map equation needs at least one edge");
  const double two_m = 2.0 * static_cast<double>(graph.edge_count());
  const auto& mem = partition.membership();
  std::vector<double> exit(partition.community_count(), 0.0), flow(partition.community_count(), 0.0);
  double node_term = 0;
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    const double p = static_cast<double>(graph.degree(v)) / two_m;
    flow[mem[v]] += p;
    node_term += plogp(p);
  }
  for (auto [u, v] : graph.edges()) {
    if (mem[u] != mem[v]) {
      exit[mem[u]] += 1.0 / two_m;
      exit[mem[v]] += 1.0 / two_m;
    }
  }
  double total_exit = 0, exit_term = 0, module_term = 0;
  for (std::size_t c = 0; c < exit.size(); ++c) {
    total_exit += exit[c];
    exit_term += plogp(exit[c]);
    module_term += plogp(exit[c] + flow[c]);
  }
  return plogp(total_exit) - 2.0 * exit_term - node_term + module_term;
}

namespace {

constexpr double kInfomapTolerance = 1e-10;
constexpr int kInfomapMaxSweeps = 1000;

// Greedy local moving on one level. Returns true when any node moved.
bool infomap_move_nodes(const WeightedGraph& g, std::vector<std::size_t>& mem, Rng& rng) {
  const std::size_t n = g.size();
  const double total = g.total;
  std::vector<double> flow(n, 0.0), exit(n, 0.0), node_flow(n), node_exit(n);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    node_flow[v] = g.strength[v] / total;
    node_exit[v] = (g.strength[v] - 2.0 * g.self_loop[v]) / total;
    flow[mem[v]] += node_flow[v];
    ++size[mem[v]];
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (auto [u, w] : g.adj[v]) {
      if (mem[u] != mem[v]) exit[mem[v]] += w / total;
    }
  }
  double total_exit = std::accumulate(exit.begin(), exit.end(), 0.0);
  std::vector<std::size_t> empty;
  for (std::size_t c = n; c-- > 0;) {
    if (size[c] == 0) empty.push_back(c);
  }

  NeighborWeights nw(n);
  bool any_move = false;
  for (int sweep = 0; sweep < kInfomapMaxSweeps; ++sweep) {
    bool moved = false;
    for (std::size_t v : rng.permutation(n)) {
      const std::size_t a = mem[v];
      nw.collect(g, v, [&](std::size_t u) { return mem[u]; });
      const double w_va = nw.weight(a) / total;
      const double exit_a = std::max(0.0, exit[a] - node_exit[v] + 2.0 * w_va);
      const double flow_a = flow[a] - node_flow[v];

      auto delta_to = [&](std::size_t b, double w_vb) {
        const double exit_b = std::max(0.0, exit[b] + node_exit[v] - 2.0 * w_vb);
        const double flow_b = flow[b] + node_flow[v];
        const double new_total = total_exit - exit[a] - exit[b] + exit_a + exit_b;
        return plogp(new_total) - plogp(total_exit) -
               2.0 * (plogp(exit_a) + plogp(exit_b) - plogp(exit[a]) - plogp(exit[b])) +
               plogp(exit_a + flow_a) + plogp(exit_b + flow_b) - plogp(exit[a] + flow[a]) -
               plogp(exit[b] + flow[b]);
      };

      std::size_t best = a;
      double best_delta = -kInfomapTolerance;
      for (std::size_t b : nw.touched()) {
        if (b == a) continue;
        const double d = delta_to(b, nw.weight(b) / total);
        if (d < best_delta) {
          best = b;
          best_delta = d;
        }
      }
      if (size[a] > 1 && !empty.empty()) {
        const double d = delta_to(empty.back(), 0.0);
        if (d < best_delta) {
          best = empty.back();
          best_delta = d;
        }
      }
      if (best == a) continue;

      const double w_vb = nw.weight(best) / total;
      if (!empty.empty() && best == empty.back()) empty.pop_back();
      const double exit_b = std::max(0.0, exit[best] + node_exit[v] - 2.0 * w_vb);
      total_exit += exit_a + exit_b - exit[a] - exit[best];
      exit[a] = exit_a;
      flow[a] = flow_a;
      exit[best] = exit_b;
      flow[best] += node_flow[v];
      --size[a];
      ++size[best];
      mem[v] = best;
      if (size[a] == 0) empty.push_back(a);
      moved = any_move = true;
    }
    if (!moved) break;
  }
  return any_move;
}

}  // namespace

Partition infomap_two_level(const SimpleGraph& graph, std::uint64_t seed) {
  if (graph.edge_count() == 0) throw Error(ErrorCode::kNoEdges, "infomap needs at least one edge");
  const std::size_t n = graph.node_count();
  Rng rng(seed);
  WeightedGraph g = weighted_from(graph);
  std::vector<std::size_t> node_of(n);
  std::iota(node_of.begin(), node_of.end(), 0);

  for (int level = 0; level < kMaxLevels; ++level) {
    std::vector<std::size_t> mem(g.size());
    std::iota(mem.begin(), mem.end(), 0);
    if (!infomap_move_nodes(g, mem, rng)) break;
    const std::size_t count = compact(mem);
    if (count == g.size()) break;
    g = aggregate(g, mem, count);
    for (auto& a : node_of) a = mem[a];
  }

  Partition found = Partition::from_labels(graph.ids(), node_of);
  const Partition one = Partition::from_labels(graph.ids(), std::vector<std::size_t>(n, 0));
  if (map_equation(graph, one) <= map_equation(graph, found) + kInfomapTolerance) return one;
  return found;
}

Partition infomap_two_level(const CausalGraph& graph, std::uint64_t seed) {
  return infomap_two_level(undirected_projection(graph), seed);
}

// ------------------------------------------------------- Label propagation

Partition label_propagation(const SimpleGraph& graph, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  Rng rng(seed);
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::size_t> count(n, 0);
  for (int sweep = 0; sweep < kLabelPropagationMaxSweeps; ++sweep) {
    bool changed = false;
    for (std::size_t v : rng.permutation(n)) {
      if (graph.degree(v) == 0) continue;
      for (std::size_t u : graph.neighbors(v)) ++count[label[u]];
      std::size_t best = label[graph.neighbors(v).front()];
      for (std::size_t u : graph.neighbors(v)) {
        const std::size_t l = label[u];
        if (count[l] > count[best] || (count[l] == count[best] && l < best)) best = l;
      }
      for (std::size_t u : graph.neighbors(v)) count[label[u]] = 0;
      if (best != label[v]) {
        label[v] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return Partition::from_labels(graph.ids(), label);
}

Partition label_propagation(const CausalGraph& graph, std::uint64_t seed) {
  return label_propagation(undirected_projection(graph), seed);
}

// --------------------------------------------------------------- Alignment

AlignmentReport category_alignment(const CausalGraph& graph, const Partition& partition) {
  if (graph.node_count() == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no nodes");
  std::vector<std::string> ids;
  for (const auto& node : graph.nodes()) ids.push_back(node.id);
  if (partition.node_ids() != ids) {
    throw Error(ErrorCode::kPartitionMismatch, "partition does not cover exactly the graph's nodes");
  }
  AlignmentReport report;
  std::size_t majority_total = 0;
  for (const auto& members : partition.communities()) {
    std::array<std::size_t, kAllCategories.size()> counts{};
    for (std::size_t i : members) ++counts[static_cast<std::size_t>(graph.nodes()[i].category)];
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
      if (counts[c] > counts[best]) best = c;
    }
    CommunityAlignment a;
    a.size = members.size();
    a.majority = kAllCategories[best];
    a.majority_fraction = static_cast<double>(counts[best]) / static_cast<double>(members.size());
    majority_total += counts[best];
    report.communities.push_back(a);
  }
  report.purity = static_cast<double>(majority_total) / static_cast<double>(graph.node_count());
  return report;
}

// -------------------------------------------------------------- Dispatch

std::string_view to_string(CommunityAlgorithm algorithm) {
  switch (algorithm) {
    case CommunityAlgorithm::kLeiden:
      return "leiden";
    case CommunityAlgorithm::kGirvanNewman:
      return "girvan-newman";
    case CommunityAlgorithm::kInfomap:
      return "infomap";
    case CommunityAlgorithm::kLabelPropagation:
      return "label-propagation";
  }
  return "unknown";
}

std::optional<CommunityAlgorithm> parse_algorithm(std::string_view name) {
  for (auto a : {CommunityAlgorithm::kLeiden, CommunityAlgorithm::kGirvanNewman, CommunityAlgorithm::kInfomap,
                 CommunityAlgorithm::kLabelPropagation}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

Partition detect_communities(const CausalGraph& graph, CommunityAlgorithm algorithm, double resolution,
                             std::uint64_t seed) {
  const SimpleGraph g = undirected_projection(graph);
  switch (algorithm) {
    case CommunityAlgorithm::kLeiden:
      return leiden(g, resolution, seed);
    case CommunityAlgorithm::kGirvanNewman:
      return girvan_newman(g);
    case CommunityAlgorithm::kInfomap:
      return infomap_two_level(g, seed);
    case CommunityAlgorithm::kLabelPropagation:
      return label_propagation(g, seed);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown community algorithm");
}

nlohmann::json partition_document(const CausalGraph& graph, const Partition& partition,
                                  CommunityAlgorithm algorithm, double resolution, std::uint64_t seed) {
  using nlohmann::json;
  const SimpleGraph g = undirected_projection(graph);
  json assignments = json::array();
  for (std::size_t i = 0; i < partition.node_ids().size(); ++i) {
    assignments.push_back({{"node", partition.node_ids()[i]}, {"community", partition.membership()[i]}});
  }
  json quality = {{"modularity", nullptr}};
  const double gamma = algorithm == CommunityAlgorithm::kLeiden ? resolution : 1.0;
  if (g.edge_count() > 0) quality["modularity"] = modularity(g, partition, gamma);
  if (algorithm == CommunityAlgorithm::kInfomap) {
    quality["map_equation"] = g.edge_count() > 0 ? json(map_equation(g, partition)) : json(nullptr);
  }
  json alignment = nullptr;
  if (graph.node_count() > 0) {
    const AlignmentReport report = category_alignment(graph, partition);
    json rows = json::array();
    for (std::size_t c = 0; c < report.communities.size(); ++c) {
      const auto& a = report.communities[c];
      rows.push_back({{"community", c},
                      {"size", a.size},
                      {"majority_category", std::string(to_string(a.majority))},
                      {"majority_fraction", a.majority_fraction}});
    }
    alignment = {{"communities", rows}, {"purity", report.purity}};
  }
  const bool seeded = algorithm != CommunityAlgorithm::kGirvanNewman;
  return {{"session_id", graph.session_id()},
          {"algorithm", std::string(to_string(algorithm))},
          {"seed", seeded ? json(seed) : json(nullptr)},
          {"resolution", algorithm == CommunityAlgorithm::kLeiden ? json(resolution) : json(nullptr)},
          {"assignments", assignments},
          {"community_count", partition.community_count()},
          {"quality", quality},
          {"alignment", alignment}};
}

}  // namespace casegraph
