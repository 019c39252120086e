#include "ramulus/min_cost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ramulus {

MinCostFlow::MinCostFlow(int nodes) : nodes_(nodes), out_(nodes) {}

int MinCostFlow::add_arc(int from, int to, double capacity, double cost) {
  const int id = static_cast<int>(arcs_.size() / 2);
  out_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, capacity, cost, 0.0});
  out_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, 0.0, -cost, 0.0});
  return id;
}

MinCostFlow::Result MinCostFlow::solve(int source, int sink, double limit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double cap_scale = 0.0;
  for (const auto& a : arcs_) cap_scale = std::max(cap_scale, a.capacity);
  const double eps = 1e-14 * std::max(cap_scale, 1.0);
  double cost_scale = 0.0;
  for (const auto& a : arcs_) cost_scale = std::max(cost_scale, std::abs(a.cost));
  // Improvements below this are rounding noise; accepting them can close a
  // negative cycle in the residual graph.
  const double slack = 1e-12 * std::max(cost_scale, 1.0);

  Result res;
  std::vector<double> dist(nodes_);
  std::vector<int> via(nodes_);
  while (res.flow < limit - eps) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), -1);
    dist[source] = 0.0;
    // Bellman-Ford; the residual graph of an SSP run has no negative cycle.
    for (int round = 0; round < nodes_; ++round) {
      bool changed = false;
      for (int u = 0; u < nodes_; ++u) {
        if (dist[u] == kInf) continue;
        for (int id : out_[u]) {
          const Arc& a = arcs_[id];
          if (a.capacity - a.flow <= eps) continue;
          const double nd = dist[u] + a.cost;
          if (nd < dist[a.to] - slack) {
            dist[a.to] = nd;
            via[a.to] = id;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == kInf) break;

    double push = limit - res.flow;
    int steps = 0;
    for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
      if (++steps > nodes_) return res;  // predecessor cycle: give up on this phase
      push = std::min(push, arcs_[via[v]].capacity - arcs_[via[v]].flow);
    }
    for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
      arcs_[via[v]].flow += push;
      arcs_[via[v] ^ 1].flow -= push;
    }
    res.flow += push;
    res.cost += push * dist[sink];
  }
  return res;
}

}  // namespace ramulus
