#pragma once

#include <span>
#include <string>
#include <vector>

#include "ramulus/geometry.hpp"
#include "ramulus/measures.hpp"

namespace ramulus {

/// Oriented weighted segment between two vertices of a PolyChain. Positive
/// multiplicity means mass flows from tail to head.
struct Edge {
  int tail = 0;
  int head = 0;
  double multiplicity = 0.0;
};

/// Polyhedral 1-current: a finite weighted oriented geometric graph.
///
/// Construction checks indices and consolidates edges joining the same
/// unordered vertex pair by summing signed multiplicities; zero sums are
/// dropped. Vertices are kept as given (isolated vertices are allowed).
class PolyChain {
 public:
  PolyChain() = default;
  PolyChain(std::vector<Point> vertices, std::vector<Edge> edges);

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  int dim() const;

  double edge_length(const Edge& e) const;

  /// Same geometry with every multiplicity multiplied by `factor`.
  PolyChain scaled(double factor) const;

  /// Same current with every multiplicity made positive by flipping edges.
  PolyChain oriented() const;

  /// Drops vertices no edge touches and renumbers.
  PolyChain compacted() const;

 private:
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
};

/// Boundary of a chain: each vertex receives inflow minus outflow.
AtomicMeasure boundary(const PolyChain& chain);

/// True iff boundary(chain) equals mu_plus - mu_minus up to `tol` per atom.
bool validate_kirchhoff(const PolyChain& chain, const AtomicMeasure& mu_minus,
                        const AtomicMeasure& mu_plus, double tol = 1e-9);

double mass(const PolyChain& chain);

/// Sum over edges of |multiplicity|^alpha * length, alpha in [0, 1].
double alpha_mass(const PolyChain& chain, double alpha);

/// Undirected support graph is acyclic (forests count).
bool is_tree(const PolyChain& chain);

/// Some oriented cycle follows the flow direction of the edges.
bool has_cycle(const PolyChain& chain);

/// Violations of the validated form: duplicate vertex positions, segments
/// meeting outside shared endpoints, vertices inside another edge.
std::vector<std::string> validated_form_issues(const PolyChain& chain, double tol = 1e-12);
inline bool is_validated(const PolyChain& chain, double tol = 1e-12) {
  return validated_form_issues(chain, tol).empty();
}

struct WeightedPath {
  std::vector<int> vertices;
  double weight = 0.0;
};

/// Splits an acyclic chain into source-to-sink paths whose weighted sum is
/// the chain edge by edge. Throws DecompositionError on cycles or when the
/// flow cannot be split without cancellation, PreconditionError when the
/// chain is not in validated form.
std::vector<WeightedPath> path_decomposition(const PolyChain& chain);

/// Re-sums a decomposition into a chain on the given vertices.
PolyChain sum_paths(std::span<const Point> vertices, std::span<const WeightedPath> paths);

struct QuantizedChain {
  PolyChain chain;
  double eta = 0.0;
};

/// Rounds every (positively oriented) multiplicity down to a multiple of
/// eta = eps / (16 N), N the number of edges.
QuantizedChain quantize_chain(const PolyChain& chain, double eps);

/// Ratio (alpha-mass of the chain inside B_r(x)) / r for every radius.
/// Throws DomainError unless x lies on the support away from the boundary
/// atoms and every radius stays below the distance to them.
std::vector<double> monotonicity_profile(const PolyChain& chain, const Point& x,
                                         std::span<const double> radii, double alpha);

bool is_nondecreasing(std::span<const double> values, double tol);

/// alpha-mass of the part of the chain inside the closed ball B_r(x).
double alpha_mass_in_ball(const PolyChain& chain, const Point& x, double r, double alpha);

// Common refinement. Vertices closer than `merge_tol` are identified and
// every edge is split at the vertices lying in its relative interior, so two
// chains describing the same current end up with identical edge sets.

/// Canonical form of one chain: merged vertices, split edges, parallel
/// pieces consolidated, unused vertices dropped.
PolyChain refine(const PolyChain& chain, double merge_tol = 1e-12);

/// Current sum T1 + T2 on the common refinement.
PolyChain add(const PolyChain& a, const PolyChain& b, double merge_tol = 1e-12);

/// Upper bound on the flat distance: mass of T1 - T2 after refinement.
double flat_upper(const PolyChain& a, const PolyChain& b, double merge_tol = 1e-12);

/// Equality as currents (multiplicities agree within weight_tol relative to
/// the largest multiplicity).
bool same_current(const PolyChain& a, const PolyChain& b, double merge_tol,
                  double weight_tol = 1e-9);

/// Equality of supports (edge sets carrying nonzero multiplicity).
bool same_support(const PolyChain& a, const PolyChain& b, double merge_tol,
                  double weight_tol = 1e-9);

/// Vertices with degree >= 3 that carry no boundary mass.
std::vector<int> branch_vertices(const PolyChain& chain, double tol = 1e-12);

}  // namespace ramulus
