#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ramulus/chains.hpp"
#include "ramulus/geometry.hpp"
#include "ramulus/measures.hpp"

namespace testing {

inline ramulus::Point pt(double x, double y) {
  ramulus::Point p(2);
  p << x, y;
  return p;
}

inline ramulus::Point pt(double x) {
  ramulus::Point p(1);
  p << x;
  return p;
}

/// Random balanced boundary in the unit square: n atoms with weights of
/// both signs bounded away from zero.
inline ramulus::Boundary random_boundary(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ramulus::Atom> atoms;
  double sum = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double w = (i % 2 ? 1.0 : -1.0) * (0.2 + u(rng));
    atoms.push_back({pt(u(rng), u(rng)), w});
    sum += w;
  }
  if (std::abs(sum) < 0.05) {
    atoms.back().weight += atoms.back().weight > 0 ? 0.3 : -0.3;
    sum += atoms.back().weight > 0 ? 0.3 : -0.3;
  }
  atoms.push_back({pt(u(rng), u(rng)), -sum});
  return ramulus::Boundary(ramulus::AtomicMeasure(std::move(atoms)));
}

/// Random tree chain with positive multiplicities on random points.
inline ramulus::PolyChain random_tree_chain(std::mt19937_64& rng, int vertices) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ramulus::Point> pts;
  std::vector<ramulus::Edge> edges;
  for (int i = 0; i < vertices; ++i) pts.push_back(pt(u(rng), u(rng)));
  for (int i = 1; i < vertices; ++i) {
    const int parent = static_cast<int>(u(rng) * i);
    edges.push_back({parent, i, 0.1 + 2.0 * u(rng)});
  }
  return ramulus::PolyChain(std::move(pts), std::move(edges));
}

}  // namespace testing
