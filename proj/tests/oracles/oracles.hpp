#pragma once

// Independent reference implementations used only by the tests. None of
// them calls into the library code they are compared against.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec = Eigen::VectorXd;

/// Tree over n labelled terminals (0..n-1) and s unlabelled Steiner
/// vertices (n..n+s-1).
struct XTree {
  int n = 0;
  int s = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Every tree whose Steiner vertices have degree >= 3, generated by
/// decoding all Pruefer sequences over n + s labels for s = 0..n-2 and
/// deduplicating by split system.
std::vector<XTree> brute_force_trees(int n);

/// Sorted list of terminal bipartitions induced by the edges, each as the
/// bitmask of the side without terminal 0. Determines the tree up to
/// relabelling of Steiner vertices.
std::string split_signature(int n, int s, const std::vector<std::pair<int, int>>& edges);

/// Flow on every edge from the edge's first to its second vertex: minus the
/// net weight of the terminals behind the first vertex.
std::vector<double> split_flows(const XTree& t, const std::vector<double>& weights);

/// Flat norm of a signed atomic measure by enumerating every basis of the
/// partial-transport problem (transport cells plus unit-cost discards).
/// Positions are given per atom; practical up to about 3 atoms per side.
double flat_norm_by_bases(const std::vector<Vec>& positions, const std::vector<double>& weights);

/// Brute-force Gilbert value: every tree from brute_force_trees with every
/// Steiner vertex on a grid of step h over the bounding box, followed by
/// one refinement with step h / 10 around the best grid point. Supports up
/// to two Steiner vertices (four terminals) in the plane.
double grid_gilbert(const std::vector<Vec>& terminals, const std::vector<double>& weights, double alpha, double h);

/// Weighted geometric median by Weiszfeld iteration.
Vec weiszfeld(const std::vector<Vec>& points, const std::vector<double>& weights, int iterations = 100000);

/// Best Y-branch cost over a grid of branch positions with the given step
/// across the bounding box of the three points (plane only).
double three_point_grid(const Vec& x1, double a1, const Vec& x2, double a2, const Vec& y, double alpha,
                        double step);

}  // namespace oracle
