#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ramulus/chains.hpp"
#include "ramulus/geometry.hpp"
#include "ramulus/topology.hpp"

namespace ramulus {

/// Steiner placement for a fixed topology and fixed edge flows: minimize
/// F = sum_e |flow_e|^alpha * |x_head - x_tail| over the Steiner positions.
struct PlacementProblem {
  Topology topology;
  std::vector<double> flows;
  std::vector<Point> terminals;
  double alpha = 0.0;
};

struct PlacementResult {
  std::vector<Point> steiner_positions;
  double value = 0.0;
  /// Certified upper bound on value - min F (duality gap).
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Vertex pairs (topology ids) closer than 1e-7 * diam(terminals).
  std::vector<std::pair<int, int>> collapsed_pairs;
};

/// Throws DomainError if sizes or dimensions disagree, alpha is outside
/// [0, 1], or a flow is not finite.
void check_problem(const PlacementProblem& p);

/// |flow|^alpha, with zero flow costing nothing for every alpha.
double edge_cost(double flow, double alpha);

double placement_objective(const PlacementProblem& p, std::span<const Point> steiner);

/// Objective with every length replaced by sqrt(length^2 + eps^2).
double smoothed_objective(const PlacementProblem& p, std::span<const Point> steiner, double eps);

/// Gradient of smoothed_objective, one row per Steiner vertex.
Eigen::MatrixXd smoothed_gradient(const PlacementProblem& p, std::span<const Point> steiner, double eps);

/// Lower bound on min F obtained from a feasible dual built at `steiner`
/// with smoothing eps.
double dual_bound(const PlacementProblem& p, std::span<const Point> steiner, double eps);

/// Iteratively reweighted least squares on the smoothed objective with
/// continuation in the smoothing, certified by the duality gap of the
/// nonsmooth problem: converged iff value - bound <= tol * (1 + value).
/// Falls back to Polyak subgradient steps when reweighting stalls.
PlacementResult minimize_placement(const PlacementProblem& p, double tol = 1e-9, int max_iter = 10000);

/// The network with terminals first, then the given Steiner positions.
PolyChain realize(const PlacementProblem& p, std::span<const Point> steiner);

}  // namespace ramulus
