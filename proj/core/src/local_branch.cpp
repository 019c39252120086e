#include "ramulus/local_branch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "ramulus/errors.hpp"
#include "ramulus/optimizer.hpp"
#include "ramulus/topology.hpp"

namespace ramulus {

namespace {

constexpr double kPi = std::numbers::pi;

void require_distinct(std::span<const Point> pts, const char* what) {
  for (const auto& p : pts) require_finite(p);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != pts[0].size()) throw DomainError(std::string(what) + ": mixed dimensions");
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (distance(pts[i], pts[j]) == 0.0) throw DomainError(std::string(what) + ": coincident points");
  }
}

Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

// Center of the circle through p, q whose arc on the side of s sees the
// chord [p, q] under the inscribed angle phi.
Eigen::Vector2d arc_center(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& s,
                           double phi) {
  const Eigen::Vector2d mid = 0.5 * (p + q);
  Eigen::Vector2d nrm = perp(q - p).normalized();
  if (nrm.dot(s - mid) < 0) nrm = -nrm;
  return mid + 0.5 * (q - p).norm() / std::tan(phi) * nrm;
}

double chain_value(const PolyChain& c, double alpha, double merge_tol) {
  return alpha_mass(refine(c, merge_tol), alpha);
}

}  // namespace

YBranch three_point_branch(const ThreePointInstance& inst) {
  const Point pts[] = {inst.x1, inst.x2, inst.y};
  require_distinct(pts, "three_point");
  if (!(inst.a1 > 0) || !(inst.a2 > 0)) throw DomainError("three_point: masses must be positive");
  if (!(inst.alpha >= 0 && inst.alpha < 1)) throw DomainError("three_point: alpha outside [0, 1)");

  const BranchAngles ang = branch_angles(inst.a1, inst.a2, inst.alpha);
  if (!ang.feasible || ang.theta12 >= kPi - kAngleTolerance || ang.theta1 <= kAngleTolerance ||
      ang.theta2 <= kAngleTolerance)
    return {};

  // Work in the plane of the triangle.
  const Point u = inst.x2 - inst.x1;
  Point w = inst.y - inst.x1;
  const Point e1 = u.normalized();
  w -= w.dot(e1) * e1;
  const double scale = std::max({u.norm(), (inst.y - inst.x1).norm(), (inst.y - inst.x2).norm()});
  if (w.norm() <= 1e-12 * scale) return {};  // collinear
  const Point e2 = w.normalized();
  auto to2 = [&](const Point& p) {
    const Point r = p - inst.x1;
    return Eigen::Vector2d(r.dot(e1), r.dot(e2));
  };
  const Eigen::Vector2d p1 = to2(inst.x1), p2 = to2(inst.x2), py = to2(inst.y);

  // The branch vertex sees [x1, x2] under theta12 and [x1, y] under
  // pi - theta1; it is the second intersection of the two circles.
  const Eigen::Vector2d o1 = arc_center(p1, p2, py, ang.theta12);
  const Eigen::Vector2d o2 = arc_center(p1, py, p2, kPi - ang.theta1);
  const Eigen::Vector2d axis = o2 - o1;
  if (axis.norm() <= 1e-14 * scale) return {};
  const Eigen::Vector2d dir = axis.normalized();
  const Eigen::Vector2d foot = o1 + (p1 - o1).dot(dir) * dir;
  const Eigen::Vector2d v2 = 2.0 * foot - p1;

  // Strictly inside the triangle.
  auto cross = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); };
  const double area = cross(p2 - p1, py - p1);
  const double l1 = cross(p2 - v2, py - v2) / area;
  const double l2 = cross(py - v2, p1 - v2) / area;
  const double l3 = 1.0 - l1 - l2;
  if (!(l1 > 1e-12 && l2 > 1e-12 && l3 > 1e-12)) return {};

  const Point v = inst.x1 + v2.x() * e1 + v2.y() * e2;
  const double t12 = angle_between(inst.x1 - v, inst.x2 - v);
  const double t1y = angle_between(inst.x1 - v, inst.y - v);
  const double t2y = angle_between(inst.x2 - v, inst.y - v);
  if (std::abs(t12 - ang.theta12) > 1e-7 || std::abs(t1y - (kPi - ang.theta1)) > 1e-7 ||
      std::abs(t2y - (kPi - ang.theta2)) > 1e-7)
    return {};
  return {true, v};
}

PolyChain solve_three_point(const ThreePointInstance& inst) {
  const YBranch y = three_point_branch(inst);
  const double a1 = inst.a1, a2 = inst.a2, s = a1 + a2;
  const std::vector<Point> base{inst.x1, inst.x2, inst.y};
  const Point pts[] = {inst.x1, inst.x2, inst.y};
  const double merge = 1e-12 * diameter(pts);

  std::vector<PolyChain> candidates;
  if (y.found) {
    auto verts = base;
    verts.push_back(y.vertex);
    candidates.emplace_back(verts, std::vector<Edge>{{0, 3, a1}, {1, 3, a2}, {3, 2, s}});
  }
  candidates.emplace_back(base, std::vector<Edge>{{0, 2, a1}, {1, 2, a2}});
  candidates.emplace_back(base, std::vector<Edge>{{1, 0, a2}, {0, 2, s}});
  candidates.emplace_back(base, std::vector<Edge>{{0, 1, a1}, {1, 2, s}});

  // Overlapping candidates tie with the path they refine to; keep the one
  // already in validated form (one of the degenerations always is).
  std::size_t best = candidates.size();
  double best_value = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!is_validated(candidates[i], merge)) continue;
    const double v = chain_value(candidates[i], inst.alpha, merge);
    if (best == candidates.size() || v < best_value * (1 - 1e-14)) {
      best = i;
      best_value = v;
    }
  }
  return candidates[best];
}

std::string to_string(LocalLabel label) {
  switch (label) {
    case LocalLabel::W:
      return "W";
    case LocalLabel::Z:
      return "Z";
    case LocalLabel::Other:
      break;
  }
  return "OTHER";
}

namespace {

constexpr int kA = 0, kB = 1, kC = 2, kD = 3, kE = 4, kF = 5;

void check_four(const FourPointInstance& inst) {
  const Point pts[] = {inst.A, inst.B, inst.C, inst.D};
  require_distinct(pts, "four_point");
  if (!(inst.theta > 0) || !std::isfinite(inst.theta)) throw DomainError("four_point: theta must be positive");
  if (inst.k < 1) throw DomainError("four_point: k must be at least 1");
  if (!(inst.alpha >= 0 && inst.alpha < 1)) throw DomainError("four_point: alpha outside [0, 1)");
}

std::vector<Point> corners(const FourPointInstance& inst) { return {inst.A, inst.B, inst.C, inst.D}; }

std::vector<double> weights(const FourPointInstance& inst) {
  const double d = inst.theta / inst.k;
  return {-inst.theta, d, -d, inst.theta};
}

double merge_tol(const FourPointInstance& inst) {
  const auto pts = corners(inst);
  return 1e-9 * diameter(pts);
}

struct Shape {
  std::string id;
  int branch_points;
  std::vector<std::pair<int, int>> edges;
};

std::vector<Shape> catalogue() {
  using P = std::pair<int, int>;
  const P AB{kA, kB}, AC{kA, kC}, AD{kA, kD}, BC{kB, kC}, BD{kB, kD}, CD{kC, kD};
  std::vector<Shape> out{
      {"1a", 0, {AB, AC, AD}}, {"1b", 0, {AB, AC, BD}}, {"1c", 0, {AB, AC, CD}}, {"1d", 0, {AB, AD, BC}},
      {"1e", 0, {AB, AD, CD}}, {"1f", 0, {AB, BC, BD}}, {"1g", 0, {AB, BC, CD}}, {"1h", 0, {AB, BD, CD}},
      {"1i", 0, {AB, CD}},     {"1j", 0, {AC, AD, BC}}, {"1k", 0, {AC, AD, BD}}, {"1l", 0, {AC, BC, BD}},
      {"1m", 0, {AC, BC, CD}}, {"1n", 0, {AC, BD}},     {"1o", 0, {AC, BD, CD}}, {"1p", 0, {AD, BC}},
      {"1q", 0, {AD, BC, BD}}, {"1r", 0, {AD, BC, CD}}, {"1s", 0, {AD, BD, CD}},
  };
  // One branch point E joined to three corners; the fourth corner hangs on
  // one of the other three.
  const char names[] = "ABCD";
  const char* fam[] = {"2d", "2c", "2b", "2a"};  // indexed by the corner E misses
  for (int missing = kD; missing >= kA; --missing) {
    std::vector<P> star;
    for (int c = kA; c <= kD; ++c)
      if (c != missing) star.push_back({c, kE});
    for (int c = kA; c <= kD; ++c) {
      if (c == missing) continue;
      Shape s{std::string(fam[missing]) + ":" + names[missing] + names[c], 1, star};
      s.edges.push_back({missing, c});
      out.push_back(std::move(s));
    }
  }
  out.push_back({"2e", 1, {{kA, kE}, {kB, kE}, {kC, kE}, {kD, kE}}});
  out.push_back({"3a", 2, {{kE, kF}, {kA, kE}, {kB, kE}, {kC, kF}, {kD, kF}}});
  out.push_back({"3b", 2, {{kE, kF}, {kA, kE}, {kC, kE}, {kB, kF}, {kD, kF}}});
  out.push_back({"3c", 2, {{kE, kF}, {kA, kE}, {kD, kE}, {kB, kF}, {kC, kF}}});
  return out;
}

FourPointCandidate build(const FourPointInstance& inst, const Shape& shape) {
  FourPointCandidate cand;
  cand.id = shape.id;
  const Topology topo(4, shape.branch_points, shape.edges);
  const auto w = weights(inst);
  std::vector<double> flows;
  try {
    flows = edge_flows(topo, w);
  } catch (const DomainError&) {
    return cand;
  }
  for (double f : flows)
    if (std::abs(f) <= 1e-12 * inst.theta) return cand;
  cand.realizable = true;

  PlacementProblem prob{topo, flows, corners(inst), inst.alpha};
  std::vector<Point> steiner;
  if (shape.branch_points > 0) steiner = minimize_placement(prob).steiner_positions;
  cand.network = realize(prob, steiner);
  cand.value = chain_value(cand.network, inst.alpha, merge_tol(inst));
  return cand;
}

}  // namespace

PolyChain w_network(const FourPointInstance& inst) {
  const double t = inst.theta;
  return PolyChain(corners(inst), {{kA, kB, t}, {kB, kC, t * (inst.k - 1) / inst.k}, {kC, kD, t}});
}

PolyChain z_network(const FourPointInstance& inst) {
  return PolyChain(corners(inst), {{kA, kD, inst.theta}, {kC, kB, inst.theta / inst.k}});
}

double w_alpha_mass(const FourPointInstance& inst) {
  const double ta = std::pow(inst.theta, inst.alpha);
  const double inner = inst.k == 1 ? 0.0 : std::pow((inst.k - 1.0) / inst.k, inst.alpha);
  return ta * (distance(inst.A, inst.B) + distance(inst.C, inst.D) + inner * distance(inst.B, inst.C));
}

std::vector<FourPointCandidate> four_point_candidates(const FourPointInstance& inst) {
  check_four(inst);
  std::vector<FourPointCandidate> out;
  for (const auto& shape : catalogue()) out.push_back(build(inst, shape));
  return out;
}

bool same_as_w_or_z(const FourPointInstance& inst, const PolyChain& network) {
  const auto pts = corners(inst);
  const double tol = 1e-7 * diameter(pts);
  return same_current(network, z_network(inst), tol, 1e-6) || same_current(network, w_network(inst), tol, 1e-6);
}

FourPointResult classify_four_point(const FourPointInstance& inst) {
  auto all = four_point_candidates(inst);
  FourPointResult res;
  const double merge = merge_tol(inst);
  res.w_value = chain_value(w_network(inst), inst.alpha, merge);
  res.z_value = chain_value(z_network(inst), inst.alpha, merge);

  for (auto& c : all)
    if (c.realizable) res.ranking.push_back(std::move(c));
  // Stable sort keeps catalogue order among equal values.
  std::stable_sort(res.ranking.begin(), res.ranking.end(),
                   [](const FourPointCandidate& a, const FourPointCandidate& b) { return a.value < b.value; });
  if (res.ranking.empty()) throw DomainError("four_point: no realizable candidate");

  // First candidate in catalogue order within 1e-10 of the minimum.
  const double best = res.ranking.front().value;
  const FourPointCandidate* winner = nullptr;
  for (const auto& shape : catalogue()) {
    for (const auto& c : res.ranking)
      if (c.id == shape.id && c.value <= best * (1 + 1e-10)) {
        winner = &c;
        break;
      }
    if (winner) break;
  }
  res.winner = winner->id;
  const auto pts = corners(inst);
  const double tol = 1e-7 * diameter(pts);
  if (same_current(winner->network, z_network(inst), tol, 1e-6))
    res.label = LocalLabel::Z;
  else if (same_current(winner->network, w_network(inst), tol, 1e-6))
    res.label = LocalLabel::W;
  else
    res.label = LocalLabel::Other;
  return res;
}

}  // namespace ramulus
