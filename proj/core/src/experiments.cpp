#include "ramulus/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ramulus/errors.hpp"
#include "ramulus/geometry.hpp"
#include "ramulus/parallel.hpp"

namespace ramulus {

double dyadic_constant(int d) { return std::sqrt(static_cast<double>(d)) / 2.0; }

namespace {

using CubeIndex = std::vector<long long>;

bool on_dyadic_face(double x, int depth) {
  const double s = std::ldexp(x, depth);
  return s == std::floor(s);
}

// Per-coordinate translation of +-2^{-depth-20} that moves every atom off
// the dyadic faces up to `depth` while staying inside the cube.
Point face_jitter(const std::vector<Point>& pts, int d, int depth) {
  Point shift = Point::Zero(d);
  const double eps = std::ldexp(1.0, -depth - 20);
  for (int j = 0; j < d; ++j) {
    const bool hit = std::any_of(pts.begin(), pts.end(), [&](const Point& p) { return on_dyadic_face(p[j], depth); });
    if (!hit) continue;
    bool placed = false;
    for (double sign : {1.0, -1.0}) {
      const bool ok = std::all_of(pts.begin(), pts.end(), [&](const Point& p) {
        const double y = p[j] + sign * eps;
        return y > 0.0 && y < 1.0 && !on_dyadic_face(y, depth);
      });
      if (ok) {
        shift[j] = sign * eps;
        placed = true;
        break;
      }
    }
    if (!placed) throw DomainError("dyadic_transport: atoms on dyadic faces cannot be moved off by a small translation");
  }
  return shift;
}

CubeIndex cube_of(const Point& p, int level) {
  const long long cells = 1LL << level;
  CubeIndex idx(static_cast<std::size_t>(p.size()));
  for (int j = 0; j < p.size(); ++j)
    idx[j] = std::min(cells - 1, static_cast<long long>(std::floor(std::ldexp(p[j], level))));
  return idx;
}

Point cube_center(const CubeIndex& idx, int level) {
  Point c(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) c[j] = std::ldexp(static_cast<double>(idx[j]) + 0.5, -level);
  return c;
}

}  // namespace

DyadicReport dyadic_transport(const AtomicMeasure& mu_plus, double alpha, int depth) {
  if (mu_plus.empty()) throw DomainError("dyadic_transport: empty measure");
  if (depth < 1 || depth > 40) throw DomainError("dyadic_transport: depth must lie in [1, 40]");
  if (!(alpha >= 0 && alpha <= 1)) throw DomainError("dyadic_transport: alpha outside [0, 1]");
  const int d = mu_plus.dim();
  double total = 0.0;
  std::vector<Point> pts;
  for (const auto& a : mu_plus.atoms()) {
    if (!(a.weight > 0)) throw DomainError("dyadic_transport: weights must be positive");
    for (int j = 0; j < d; ++j)
      if (!(a.position[j] >= 0.0 && a.position[j] <= 1.0))
        throw DomainError("dyadic_transport: support outside the unit cube");
    total += a.weight;
    pts.push_back(a.position);
  }

  DyadicReport rep;
  rep.normalization = total;
  rep.center = Point::Constant(d, 0.5);
  rep.jitter = Point::Zero(d);
  const double cd = dyadic_constant(d);
  const double expo = d - 1 - d * alpha;
  rep.series_converging = alpha > 1.0 - 1.0 / d;
  rep.series_bound = rep.series_converging ? cd / (1.0 - std::exp2(expo)) : std::numeric_limits<double>::infinity();

  // A unit mass already sitting at the center needs no transport.
  if (pts.size() == 1 && pts[0] == rep.center) {
    rep.target = AtomicMeasure({{rep.center, 1.0}});
    for (int n = 1; n <= depth; ++n) rep.per_generation.push_back({n, 0.0, 0.0, cd * std::exp2(n * expo)});
    return rep;
  }

  rep.jitter = face_jitter(pts, d, depth);
  for (auto& p : pts) p += rep.jitter;

  std::vector<Point> vertices{rep.center};
  std::vector<Edge> edges;
  std::map<CubeIndex, int> previous{{CubeIndex(static_cast<std::size_t>(d), 0), 0}};
  const auto atoms = mu_plus.atoms();
  for (int n = 1; n <= depth; ++n) {
    std::map<CubeIndex, double> level_mass;
    for (std::size_t i = 0; i < pts.size(); ++i) level_mass[cube_of(pts[i], n)] += atoms[i].weight / total;
    std::map<CubeIndex, int> current;
    DyadicGeneration gen{n, 0.0, 0.0, cd * std::exp2(n * expo)};
    for (const auto& [idx, a] : level_mass) {
      CubeIndex parent = idx;
      for (auto& c : parent) c >>= 1;
      const int tail = previous.at(parent);
      const int head = static_cast<int>(vertices.size());
      vertices.push_back(cube_center(idx, n));
      current[idx] = head;
      edges.push_back({tail, head, a});
      const double len = distance(vertices[tail], vertices[head]);
      gen.mass += a * len;
      gen.alpha_mass += std::pow(a, alpha) * len;
    }
    rep.per_generation.push_back(gen);
    rep.total_alpha_mass += gen.alpha_mass;
    if (n == depth) {
      std::vector<Atom> target;
      for (const auto& [idx, a] : level_mass) target.push_back({cube_center(idx, n), a});
      rep.target = AtomicMeasure(std::move(target));
    }
    previous = std::move(current);
  }
  rep.chain = PolyChain(std::move(vertices), std::move(edges));
  return rep;
}

namespace {

struct VertexPool {
  std::vector<Point> points;
  std::map<std::vector<double>, int> index;

  int get(const Point& p) {
    std::vector<double> key(p.data(), p.data() + p.size());
    auto [it, fresh] = index.emplace(std::move(key), static_cast<int>(points.size()));
    if (fresh) points.push_back(p);
    return it->second;
  }
};

}  // namespace

PerturbationReport perturb_boundary(const PolyChain& T, std::span<const Point> points, int k, int n,
                                    std::optional<double> alpha) {
  if (k < 1 || n < 1) throw DomainError("perturb_boundary: k and n must be at least 1");
  if (points.empty()) throw DomainError("perturb_boundary: no points");
  if (alpha && !(*alpha >= 0 && *alpha < 1)) throw DomainError("perturb_boundary: alpha outside [0, 1)");
  const double r = 1.0 / n;
  const auto verts = T.vertices();
  const double scale = std::max(1.0, diameter(verts));

  const AtomicMeasure bd = boundary(T);
  const auto branch = branch_vertices(T, 1e-12);
  std::vector<int> degree(T.vertex_count(), 0);
  for (const auto& e : T.edges()) {
    ++degree[e.tail];
    ++degree[e.head];
  }

  // Edge carrying each point, then the ball preconditions.
  std::vector<int> carrier(points.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < T.edge_count(); ++e) {
      const auto& ed = T.edges()[e];
      const double dist = point_segment_distance(points[i], T.vertex(ed.tail), T.vertex(ed.head));
      if (dist < best) {
        best = dist;
        carrier[i] = static_cast<int>(e);
      }
    }
    if (carrier[i] < 0 || best > 1e-9 * scale) throw PreconditionError("perturb_boundary: point off the support");
    for (std::size_t j = 0; j < i; ++j)
      if (distance(points[i], points[j]) <= 2 * r) throw PreconditionError("perturb_boundary: balls overlap");
    for (const auto& a : bd.atoms())
      if (distance(a.position, points[i]) <= r) throw PreconditionError("perturb_boundary: ball meets a boundary atom");
    for (int v : branch)
      if (distance(T.vertex(v), points[i]) <= r) throw PreconditionError("perturb_boundary: ball meets a branch point");
  }

  // Clip every edge against every ball; inside pieces lose 1/k.
  const double keep = 1.0 - 1.0 / k;
  VertexPool pool;
  std::vector<Edge> edges;
  for (const auto& e : T.edges()) {
    const Point& a = T.vertex(e.tail);
    const Point& b = T.vertex(e.head);
    std::vector<std::pair<double, double>> inside;
    for (const auto& p : points) {
      const SegmentClip c = clip_segment_to_ball(a, b, p, r);
      if (c.hit && c.t1 > c.t0) inside.emplace_back(c.t0, c.t1);
    }
    std::sort(inside.begin(), inside.end());
    double t = 0.0;
    int from = pool.get(a);
    auto emit = [&](double t_end, double m) {
      const int to = t_end >= 1.0 ? pool.get(b) : pool.get(a + t_end * (b - a));
      if (to != from) edges.push_back({from, to, m});
      from = to;
    };
    for (const auto& [t0, t1] : inside) {
      if (t0 > t) emit(t0, e.multiplicity);
      emit(t1, e.multiplicity * keep);
      t = t1;
    }
    if (t < 1.0) emit(1.0, e.multiplicity);
  }

  PerturbationReport rep;
  rep.T_n = PolyChain(std::move(pool.points), std::move(edges));
  rep.b = Boundary(bd);
  rep.b_n = Boundary(boundary(rep.T_n));
  const double h = static_cast<double>(points.size());
  rep.mass_b = mass(rep.b.measure());
  rep.mass_b_n = mass(rep.b_n.measure());
  rep.flat_distance = flat_norm_0(rep.b_n.measure() - rep.b.measure());
  rep.mass_bound = (1.0 + h / k) * rep.mass_b;
  rep.flat_bound = h / (static_cast<double>(n) * k) * rep.mass_b;
  // Relative slack of a few ulps for the cases where the bound is attained.
  rep.mass_bound_ok = rep.mass_b_n <= rep.mass_bound * (1 + 1e-12);
  rep.flat_bound_ok = rep.flat_distance <= rep.flat_bound * (1 + 1e-12);

  if (alpha) {
    rep.alpha_mass_decreased = alpha_mass(rep.T_n, *alpha) < alpha_mass(T, *alpha);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Edge& e = T.edges()[carrier[i]];
      Point u = T.vertex(e.head) - T.vertex(e.tail);
      u.normalize();
      if (e.multiplicity < 0) u = -u;
      const Point& p = points[i];
      FourPointInstance inst{p - 4 * r * u, p - r * u, p + r * u, p + 4 * r * u, std::abs(e.multiplicity), k, *alpha};
      rep.local_labels.push_back(classify_four_point(inst).label);
      rep.local_instances.push_back(std::move(inst));
    }
  }
  return rep;
}

StabilityReport stability_experiment(const Boundary& b, std::span<const Boundary> family, double alpha,
                                     const SolverOptions& options, double tolerance) {
  StabilityReport rep;
  rep.tolerance = tolerance;
  rep.base_value = solve_gilbert(b, alpha, options).value;
  rep.members.resize(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    StabilityMember& m = rep.members[i];
    m.flat_distance = flat_norm_0(family[i].measure() - b.measure());
    SolveResult solved = solve_gilbert(family[i], alpha, options);
    m.value = solved.value;
    m.deviation = std::abs(m.value - rep.base_value);
    m.network = std::move(solved.best);
  });
  std::vector<std::size_t> order(rep.members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return rep.members[x].flat_distance > rep.members[y].flat_distance;
  });
  rep.monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (rep.members[order[i]].deviation > rep.members[order[i - 1]].deviation + tolerance) rep.monotone = false;
  if (!order.empty()) rep.final_deviation = rep.members[order.back()].deviation;
  return rep;
}

}  // namespace ramulus
