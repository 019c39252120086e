#pragma once

#include <optional>
#include <vector>

#include "ramulus/chains.hpp"
#include "ramulus/local_branch.hpp"
#include "ramulus/measures.hpp"
#include "ramulus/solver.hpp"

namespace ramulus {

// Dyadic transport

/// Distance from the center of a dyadic cube to the center of one of its
/// children, in units of the child side: sqrt(d) / 2.
double dyadic_constant(int d);

struct DyadicGeneration {
  int n = 0;
  double mass = 0.0;        // mass of P_n
  double alpha_mass = 0.0;  // alpha-mass of P_n
  double bound = 0.0;       // c_d 2^{n (d - 1 - d alpha)}
};

struct DyadicReport {
  PolyChain chain;  // sum of the generations
  std::vector<DyadicGeneration> per_generation;
  double total_alpha_mass = 0.0;
  bool series_converging = false;  // alpha > 1 - 1/d
  /// c_d / (1 - 2^{d - 1 - d alpha}) when converging, infinity otherwise.
  double series_bound = 0.0;
  /// The input was divided by this to make it a probability measure.
  double normalization = 1.0;
  /// Translation applied to move atoms off dyadic faces (zero if none).
  Point jitter;
  /// Final-generation measure and the cube center it starts from.
  AtomicMeasure target;
  Point center;
};

/// Routes a unit mass from the center of [0,1]^d through the centers of
/// the nested dyadic cubes down to generation `depth`. Throws DomainError
/// for non-positive weights, support outside the cube, or atoms that no
/// small translation moves off the dyadic faces.
DyadicReport dyadic_transport(const AtomicMeasure& mu_plus, double alpha, int depth);

// Boundary perturbation

struct PerturbationReport {
  PolyChain T_n;
  Boundary b;
  Boundary b_n;
  double mass_b = 0.0;
  double mass_b_n = 0.0;
  double flat_distance = 0.0;  // flat_norm_0(b_n - b)
  double mass_bound = 0.0;     // (1 + h / k) mass(b)
  double flat_bound = 0.0;     // h / (n k) mass(b)
  bool mass_bound_ok = false;
  bool flat_bound_ok = false;
  /// Filled when alpha is given.
  std::optional<bool> alpha_mass_decreased;
  std::vector<LocalLabel> local_labels;
  std::vector<FourPointInstance> local_instances;
};

/// T_n = T - (1/k) sum_i T restricted to B_{1/n}(p_i), by exact clipping.
/// With alpha, also classifies the four-point picture at every p_i.
/// Throws PreconditionError when a point is off the support, balls
/// overlap, or a ball reaches a boundary atom or a branch vertex of T.
PerturbationReport perturb_boundary(const PolyChain& T, std::span<const Point> points, int k, int n,
                                    std::optional<double> alpha = std::nullopt);

// Stability

struct StabilityMember {
  double flat_distance = 0.0;
  double value = 0.0;
  double deviation = 0.0;  // |value - base value|
  PolyChain network;       // the member's optimum
};

struct StabilityReport {
  double base_value = 0.0;
  std::vector<StabilityMember> members;  // input order
  /// Deviations, taken in order of decreasing flat distance, never grow by
  /// more than the tolerance.
  bool monotone = false;
  /// Deviation of the member nearest to b.
  double final_deviation = 0.0;
  double tolerance = 1e-4;
};

/// Members are solved concurrently; the report keeps input order.
StabilityReport stability_experiment(const Boundary& b, std::span<const Boundary> family, double alpha,
                                     const SolverOptions& options = {}, double tolerance = 1e-4);

}  // namespace ramulus
