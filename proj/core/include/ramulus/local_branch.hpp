#pragma once

#include <string>
#include <vector>

#include "ramulus/chains.hpp"
#include "ramulus/geometry.hpp"

namespace ramulus {

/// Two sources a1 at x1, a2 at x2 and one sink y receiving a1 + a2.
struct ThreePointInstance {
  Point x1;
  double a1 = 1.0;
  Point x2;
  double a2 = 1.0;
  Point y;
  double alpha = 0.5;
};

/// Optimal network for three terminals: a Y whose branch vertex meets the
/// angle conditions when that vertex falls inside the triangle, otherwise
/// the best two-edge degeneration (branch at y, path through x1 or x2).
/// Vertices: x1, x2, y, then the branch vertex for a Y.
PolyChain solve_three_point(const ThreePointInstance& inst);

/// Branch vertex of the Y (empty optional semantics via `found`).
struct YBranch {
  bool found = false;
  Point vertex;
};
YBranch three_point_branch(const ThreePointInstance& inst);

/// Boundary theta (delta_D - delta_A) + (theta / k) (delta_B - delta_C).
struct FourPointInstance {
  Point A;
  Point B;
  Point C;
  Point D;
  double theta = 1.0;
  int k = 1;
  double alpha = 0.5;
};

/// One competitor of the local catalogue.
struct FourPointCandidate {
  std::string id;   // "1a" ... "1s", "2a:DA", ..., "2e", "3a" ... "3c"
  bool realizable = false;
  double value = 0.0;
  PolyChain network;  // vertices A, B, C, D, then branch points
};

enum class LocalLabel { W, Z, Other };

struct FourPointResult {
  LocalLabel label = LocalLabel::Other;
  /// Catalogue id of the winner (for OTHER, the topology that wins).
  std::string winner;
  /// Realizable candidates sorted by value, catalogue order on ties.
  std::vector<FourPointCandidate> ranking;
  double w_value = 0.0;
  double z_value = 0.0;
};

std::string to_string(LocalLabel label);

/// The two reference currents.
PolyChain w_network(const FourPointInstance& inst);
PolyChain z_network(const FourPointInstance& inst);

/// Closed form theta^alpha (|AB| + |CD|) + (theta (k-1)/k)^alpha |BC|.
double w_alpha_mass(const FourPointInstance& inst);

/// Every catalogue candidate in catalogue order, realizable or not;
/// branch points placed by the convex optimizer.
std::vector<FourPointCandidate> four_point_candidates(const FourPointInstance& inst);

/// Builds and ranks the catalogue and labels the winner. Throws
/// DomainError on coincident points or invalid parameters.
FourPointResult classify_four_point(const FourPointInstance& inst);

/// Whether a candidate coincides with W or Z as a current.
bool same_as_w_or_z(const FourPointInstance& inst, const PolyChain& network);

}  // namespace ramulus
