#pragma once

#include <vector>

namespace ramulus {

/// Successive-shortest-path min-cost flow on small dense networks with real
/// capacities. Shortest paths use Bellman-Ford so residual arcs with
/// negative reduced cost need no potentials.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes);

  /// Returns the arc id (use with flow()).
  int add_arc(int from, int to, double capacity, double cost);

  struct Result {
    double flow = 0.0;
    double cost = 0.0;
  };

  /// Pushes up to `limit` units from source to sink at minimum cost.
  Result solve(int source, int sink, double limit);

  double flow(int arc) const { return arcs_[2 * arc].flow; }

 private:
  struct Arc {
    int to;
    double capacity;
    double cost;
    double flow;
  };
  int nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
};

}  // namespace ramulus
