#pragma once

#include <string>
#include <vector>

#include "ramulus/chains.hpp"
#include "ramulus/measures.hpp"

namespace ramulus {

struct SolverOptions {
  /// Largest atom count accepted; the search is super-exponential.
  int atom_cap = 8;
  /// Duality-gap tolerance handed to every placement.
  double placement_tol = 1e-9;
  /// Interior support points sampled by the monotonicity certificate.
  int monotonicity_points = 5;
  unsigned monotonicity_seed = 12345;
};

struct RankedNetwork {
  std::string code;  // canonical code of the (contracted) topology
  double value = 0.0;
  PolyChain network;
  bool converged = true;
};

/// Structural checks on the optimal network. Residuals are relative:
/// Kirchhoff against mass(b), cone direction against sum |m|^alpha at the
/// vertex, cone mass against the largest incident multiplicity.
struct Certificates {
  bool tree = false;
  bool kirchhoff = false;
  double kirchhoff_residual = 0.0;
  int branch_points = 0;
  bool branch_count = false;  // branch_points <= atoms - 2
  bool angles = false;
  double max_angle_error = 0.0;
  bool cone_balance = false;
  double max_cone_residual = 0.0;
  bool monotonicity = false;
  bool decomposition = false;
  bool placement_converged = false;

  bool all() const {
    return tree && kirchhoff && branch_count && angles && cone_balance && monotonicity && decomposition;
  }
};

struct SolveResult {
  PolyChain best;
  double value = 0.0;
  /// Support-distinct networks sorted by (value, code).
  std::vector<RankedNetwork> ranking;
  /// (ranking[1] - ranking[0]) / max(ranking[0], tiny); 0 when alone.
  double gap = 0.0;
  Certificates certificates;
  int topologies_enumerated = 0;
  int topologies_placed = 0;
};

/// Exhaustive Gilbert solver: every full Steiner topology on the atoms,
/// zero-flow edges pruned and duplicates dropped, Steiner points placed by
/// the convex optimizer, collapsed edges contracted and re-solved.
/// Throws CapacityError above the atom cap, DomainError for an empty
/// boundary or alpha outside [0, 1).
SolveResult solve_gilbert(const Boundary& b, double alpha, const SolverOptions& options = {});

/// Certificates for an arbitrary network against its boundary.
Certificates certify(const PolyChain& network, const Boundary& b, double alpha, const SolverOptions& options = {});

struct ProbeResult {
  bool unique = true;
  /// All support-distinct networks within gap_tol (relative) of the best.
  std::vector<PolyChain> networks;
  std::vector<double> values;
  SolveResult result;
};

ProbeResult uniqueness_probe(const Boundary& b, double alpha, double gap_tol = 1e-6,
                             const SolverOptions& options = {});

}  // namespace ramulus
