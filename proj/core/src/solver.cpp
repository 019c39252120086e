#include "ramulus/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "ramulus/errors.hpp"
#include "ramulus/geometry.hpp"
#include "ramulus/optimizer.hpp"
#include "ramulus/parallel.hpp"
#include "ramulus/topology.hpp"

namespace ramulus {

namespace {

struct Placed {
  PlacementProblem problem;
  std::vector<Point> steiner;
  double value = 0.0;
  bool converged = true;
};

// Contracts every topology edge shorter than `merge` (never joining two
// terminals) and returns false when nothing collapsed.
bool contract_short_edges(const PlacementProblem& p, std::span<const Point> steiner, double merge,
                          PlacementProblem& out) {
  const int n = p.topology.n_terminals();
  const int total = p.topology.vertex_count();
  auto pos = [&](int v) -> const Point& { return v < n ? p.terminals[v] : steiner[v - n]; };
  const auto edges = p.topology.edges();

  std::vector<int> order;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (distance(pos(edges[i].first), pos(edges[i].second)) < merge) order.push_back(static_cast<int>(i));
  if (order.empty()) return false;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return distance(pos(edges[a].first), pos(edges[a].second)) < distance(pos(edges[b].first), pos(edges[b].second));
  });

  std::vector<int> parent(static_cast<std::size_t>(total));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  bool merged = false;
  for (int i : order) {
    int a = find(edges[i].first);
    int b = find(edges[i].second);
    if (a == b || (a < n && b < n)) continue;
    if (a < n) std::swap(a, b);  // keep terminals as roots
    parent[a] = b;
    merged = true;
  }
  if (!merged) return false;

  std::vector<int> id(static_cast<std::size_t>(total), -1);
  for (int t = 0; t < n; ++t) id[t] = t;
  int next = n;
  for (int v = n; v < total; ++v)
    if (find(v) == v) id[v] = next++;
  std::vector<std::pair<int, int>> new_edges;
  std::vector<double> flows;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int a = id[find(edges[i].first)];
    const int b = id[find(edges[i].second)];
    if (a == b) continue;
    new_edges.push_back({a, b});
    flows.push_back(p.flows[i]);
  }
  out = PlacementProblem{Topology(n, next - n, std::move(new_edges)), std::move(flows), p.terminals, p.alpha};
  return true;
}

Placed place(const PlacementProblem& p, double merge, double tol) {
  Placed out{p, {}, 0.0, true};
  if (p.topology.steiner_count() == 0) {
    out.value = placement_objective(p, {});
    return out;
  }
  const PlacementResult r = minimize_placement(p, tol);
  out.steiner = r.steiner_positions;
  out.value = r.value;
  out.converged = r.converged;

  PlacementProblem contracted{p.topology, {}, {}, p.alpha};
  if (!contract_short_edges(p, out.steiner, merge, contracted)) return out;
  Placed c = place(contracted, merge, tol);
  if (c.value <= out.value + tol * (1 + out.value)) return c;
  return out;
}

bool same_position(const Point& a, const Point& b) { return a.size() == b.size() && a == b; }

}  // namespace

Certificates certify(const PolyChain& network, const Boundary& b, double alpha, const SolverOptions& options) {
  Certificates c;
  const PolyChain chain = network.compacted();
  const double bmass = std::max(mass(b.measure()), std::numeric_limits<double>::min());
  const auto atoms = b.atoms();
  const auto verts = chain.vertices();

  c.tree = is_tree(chain);
  const AtomicMeasure diff = boundary(chain) - b.measure();
  for (const auto& a : diff.atoms()) c.kirchhoff_residual = std::max(c.kirchhoff_residual, std::abs(a.weight) / bmass);
  c.kirchhoff = c.kirchhoff_residual <= 1e-9;

  c.branch_points = static_cast<int>(branch_vertices(chain, 1e-9).size());
  c.branch_count = static_cast<int>(atoms.size()) < 2 || c.branch_points <= static_cast<int>(atoms.size()) - 2;

  // Rays at every vertex outside the boundary support.
  std::vector<std::vector<ConeRay>> rays(chain.vertex_count());
  for (const auto& e : chain.edges()) {
    const Point d = chain.vertex(e.head) - chain.vertex(e.tail);
    const double len = d.norm();
    if (len == 0.0) continue;
    rays[e.tail].emplace_back(d / len, e.multiplicity);
    rays[e.head].emplace_back(-d / len, -e.multiplicity);
  }
  c.angles = true;
  c.cone_balance = true;
  for (std::size_t v = 0; v < chain.vertex_count(); ++v) {
    const bool terminal =
        std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return same_position(a.position, verts[v]); });
    if (terminal || rays[v].size() < 2) continue;
    const ConeResidual res = cone_balance_residual(rays[v], alpha);
    double mmax = 0.0, spread = 0.0;
    for (const auto& r : rays[v]) {
      mmax = std::max(mmax, std::abs(r.multiplicity()));
      spread += std::pow(std::abs(r.multiplicity()), alpha);
    }
    const double resid = std::max(std::abs(res.mass) / mmax, res.direction.norm() / spread);
    c.max_cone_residual = std::max(c.max_cone_residual, resid);

    if (rays[v].size() != 3) continue;
    // Two rays of one sign merge into the third.
    int trunk = -1;
    for (int i = 0; i < 3; ++i) {
      const bool pos = rays[v][i].multiplicity() > 0;
      if (pos != (rays[v][(i + 1) % 3].multiplicity() > 0) && pos != (rays[v][(i + 2) % 3].multiplicity() > 0))
        trunk = i;
    }
    if (trunk < 0) {
      c.angles = false;
      continue;
    }
    const ConeRay& r1 = rays[v][(trunk + 1) % 3];
    const ConeRay& r2 = rays[v][(trunk + 2) % 3];
    const BranchAngles want = branch_angles(std::abs(r1.multiplicity()), std::abs(r2.multiplicity()), alpha);
    if (!want.feasible) {
      c.angles = false;
      continue;
    }
    const Point back = -rays[v][trunk].direction();
    const double err = std::max(std::abs(angle_between(r1.direction(), back) - want.theta1),
                                std::abs(angle_between(r2.direction(), back) - want.theta2));
    c.max_angle_error = std::max(c.max_angle_error, err);
  }
  c.angles = c.angles && c.max_angle_error <= 1e-5;
  c.cone_balance = c.max_cone_residual <= 1e-6;

  // Monotonicity of the density ratio at random interior support points.
  c.monotonicity = true;
  double total_len = 0.0;
  for (const auto& e : chain.edges()) total_len += chain.edge_length(e);
  if (total_len > 0 && options.monotonicity_points > 0) {
    std::mt19937_64 rng(options.monotonicity_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const AtomicMeasure bd = boundary(chain);
    for (int s = 0; s < options.monotonicity_points; ++s) {
      double pick = unit(rng) * total_len;
      const Edge* chosen = &chain.edges().back();
      for (const auto& e : chain.edges()) {
        pick -= chain.edge_length(e);
        if (pick <= 0) {
          chosen = &e;
          break;
        }
      }
      const double t = 0.1 + 0.8 * unit(rng);
      const Point x = chain.vertex(chosen->tail) + t * (chain.vertex(chosen->head) - chain.vertex(chosen->tail));
      double reach = std::numeric_limits<double>::infinity();
      for (const auto& a : bd.atoms())
        if (std::abs(a.weight) > 1e-12 * bmass) reach = std::min(reach, distance(a.position, x));
      if (!(reach > 0) || !std::isfinite(reach)) continue;
      std::vector<double> radii;
      for (int j = 1; j <= 10; ++j) radii.push_back(0.999 * reach * j / 10.0);
      try {
        const auto prof = monotonicity_profile(chain, x, radii, alpha);
        const double top = *std::max_element(prof.begin(), prof.end());
        if (!is_nondecreasing(prof, 1e-9 * (1 + top))) c.monotonicity = false;
      } catch (const Error&) {
        c.monotonicity = false;
      }
    }
  }

  try {
    const PolyChain canon = refine(chain, 1e-12 * std::max(1.0, diameter(verts)));
    path_decomposition(canon.oriented());
    c.decomposition = true;
  } catch (const Error&) {
    c.decomposition = false;
  }
  c.placement_converged = true;
  return c;
}

SolveResult solve_gilbert(const Boundary& b, double alpha, const SolverOptions& options) {
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("solve_gilbert: alpha outside [0, 1)");
  const auto atoms = b.atoms();
  const int n = static_cast<int>(atoms.size());
  if (n == 0) throw DomainError("solve_gilbert: zero boundary");
  if (n > options.atom_cap)
    throw CapacityError("solve_gilbert: " + std::to_string(n) + " atoms exceed the cap of " +
                        std::to_string(options.atom_cap));

  std::vector<Point> terminals;
  std::vector<double> weights;
  double wmass = 0.0;
  for (const auto& a : atoms) {
    terminals.push_back(a.position);
    weights.push_back(a.weight);
    wmass += std::abs(a.weight);
  }
  const double diam = diameter(terminals);
  const double merge = 1e-7 * diam;

  // Prune zero-flow edges, then keep one representative per reduced code.
  const std::vector<Topology> full = full_topologies(n);
  std::vector<ReducedTopology> reduced(full.size());
  parallel_for(full.size(), [&](std::size_t i) {
    reduced[i] = reduce_zero_flows(full[i], edge_flows(full[i], weights), 1e-12 * wmass);
  });
  std::vector<std::size_t> unique;
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < reduced.size(); ++i)
      if (seen.emplace(reduced[i].topology.code(), i).second) unique.push_back(i);
  }

  std::vector<RankedNetwork> candidates(unique.size());
  parallel_for(unique.size(), [&](std::size_t j) {
    const ReducedTopology& r = reduced[unique[j]];
    const Placed pl = place(PlacementProblem{r.topology, r.flows, terminals, alpha}, merge, options.placement_tol);
    RankedNetwork& out = candidates[j];
    out.code = pl.problem.topology.code();
    out.network = realize(pl.problem, pl.steiner).compacted();
    out.value = alpha_mass(out.network, alpha);
    out.converged = pl.converged;
  });

  std::sort(candidates.begin(), candidates.end(), [](const RankedNetwork& x, const RankedNetwork& y) {
    return x.value != y.value ? x.value < y.value : x.code < y.code;
  });

  // Distinct supports only; identical networks have near-identical values.
  SolveResult res;
  for (auto& cand : candidates) {
    bool duplicate = false;
    for (auto it = res.ranking.rbegin(); it != res.ranking.rend(); ++it) {
      if (cand.value - it->value > 1e-6 * (1 + cand.value)) break;
      if (same_support(cand.network, it->network, merge, 1e-9)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) res.ranking.push_back(std::move(cand));
  }

  res.topologies_enumerated = static_cast<int>(full.size());
  res.topologies_placed = static_cast<int>(unique.size());
  res.best = res.ranking.front().network;
  res.value = res.ranking.front().value;
  if (res.ranking.size() > 1)
    res.gap = (res.ranking[1].value - res.value) / std::max(res.value, std::numeric_limits<double>::min());
  res.certificates = certify(res.best, b, alpha, options);
  res.certificates.placement_converged = res.ranking.front().converged;
  return res;
}

ProbeResult uniqueness_probe(const Boundary& b, double alpha, double gap_tol, const SolverOptions& options) {
  ProbeResult out;
  out.result = solve_gilbert(b, alpha, options);
  const double v0 = out.result.value;
  for (const auto& r : out.result.ranking)
    if (r.value - v0 <= gap_tol * std::max(v0, std::numeric_limits<double>::min())) {
      out.networks.push_back(r.network);
      out.values.push_back(r.value);
    }
  out.unique = out.networks.size() < 2;
  return out;
}

}  // namespace ramulus
