#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ramulus {

/// Combinatorial tree (or forest) over labeled terminals 0..n-1 and unlabeled
/// Steiner vertices n..n+s-1. Every Steiner vertex has degree >= 3 and every
/// component contains a terminal.
class Topology {
 public:
  Topology() = default;
  /// Validates the structure and computes the canonical code.
  Topology(int n_terminals, int steiner_count, std::vector<std::pair<int, int>> edges);

  int n_terminals() const { return n_; }
  int steiner_count() const { return s_; }
  int vertex_count() const { return n_ + s_; }
  bool is_steiner(int v) const { return v >= n_; }
  std::span<const std::pair<int, int>> edges() const { return edges_; }
  /// Invariant under relabeling Steiner vertices; terminals stay labeled.
  const std::string& code() const { return code_; }
  bool is_connected() const;

 private:
  int n_ = 0;
  int s_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::string code_;
};

/// Canonical code of a forest over n terminals and s Steiner vertices.
std::string canonical_code(int n_terminals, int steiner_count,
                           std::span<const std::pair<int, int>> edges);

/// Every tree over n terminals with up to n-2 Steiner vertices of degree >= 3,
/// one per isomorphism class (terminals fixed), sorted by code.
std::vector<Topology> enumerate_topologies(int n_terminals);

/// The (2n-5)!! trees whose terminals are exactly the leaves and whose
/// n-2 Steiner vertices have degree 3 (the single edge for n = 2). Every
/// other topology is a degeneration of one of these. Sorted by code.
std::vector<Topology> full_topologies(int n_terminals);

/// Unique conservative flow on a tree or forest: terminals receive net
/// inflow equal to their weight, Steiner vertices conserve. Entry i is the
/// flow along edge i, positive from edges()[i].first to .second. Throws
/// DomainError if some component's weights do not sum to zero.
std::vector<double> edge_flows(const Topology& t, std::span<const double> weights);

/// A topology with flows after dropping edges whose flow is within `tol`
/// of zero, removing Steiner vertices left with degree < 3 (degree-2 ones
/// are bypassed by a single edge), and renumbering.
struct ReducedTopology {
  Topology topology;
  std::vector<double> flows;
};
ReducedTopology reduce_zero_flows(const Topology& t, std::span<const double> flows, double tol);

}  // namespace ramulus
