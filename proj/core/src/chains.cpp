#include "ramulus/chains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "ramulus/errors.hpp"

namespace ramulus {

namespace {

double max_abs_multiplicity(std::span<const Edge> edges) {
  double m = 0.0;
  for (const auto& e : edges) m = std::max(m, std::abs(e.multiplicity));
  return m;
}

std::vector<Edge> consolidate(std::vector<Edge> edges) {
  std::map<std::pair<int, int>, std::size_t> slot;
  std::vector<Edge> out;
  std::vector<double> scale;
  for (const auto& e : edges) {
    const auto key = std::minmax(e.tail, e.head);
    auto [it, inserted] = slot.try_emplace({key.first, key.second}, out.size());
    if (inserted) {
      out.push_back(e);
      scale.push_back(std::abs(e.multiplicity));
    } else {
      Edge& target = out[it->second];
      target.multiplicity += (target.tail == e.tail) ? e.multiplicity : -e.multiplicity;
      scale[it->second] = std::max(scale[it->second], std::abs(e.multiplicity));
    }
  }
  std::vector<Edge> kept;
  kept.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (std::abs(out[i].multiplicity) > 1e-14 * scale[i]) kept.push_back(out[i]);
  return kept;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// Shared vertex set of one or two chains, with edges broken at every
// representative lying in their relative interior.
class Refinement {
 public:
  explicit Refinement(double merge_tol) : tol_(merge_tol) {}

  void add_points(std::span<const Point> pts) {
    for (const auto& p : pts) cluster_of(p);
  }

  // Accumulates `sign * chain` into the piece map.
  void add_chain(const PolyChain& chain, double sign) {
    std::vector<int> cl(chain.vertex_count());
    for (std::size_t i = 0; i < chain.vertex_count(); ++i) cl[i] = cluster_of(chain.vertex(static_cast<int>(i)));
    for (const auto& e : chain.edges()) {
      const int a = cl[e.tail];
      const int b = cl[e.head];
      if (a == b) continue;
      const Point& pa = reps_[a];
      const Point& pb = reps_[b];
      const Point dir = pb - pa;
      const double len = dir.norm();
      std::vector<std::pair<double, int>> cuts;
      for (int r = 0; r < static_cast<int>(reps_.size()); ++r) {
        if (r == a || r == b) continue;
        const double t = (reps_[r] - pa).dot(dir) / (len * len);
        if (t * len <= tol_ || (1.0 - t) * len <= tol_) continue;
        if ((pa + t * dir - reps_[r]).norm() <= tol_) cuts.emplace_back(t, r);
      }
      std::sort(cuts.begin(), cuts.end());
      int prev = a;
      const double m = sign * e.multiplicity;
      for (const auto& [t, r] : cuts) {
        add_piece(prev, r, m);
        prev = r;
      }
      add_piece(prev, b, m);
    }
  }

  const std::vector<Point>& reps() const { return reps_; }
  const std::map<std::pair<int, int>, double>& pieces() const { return pieces_; }
  double scale() const { return scale_; }

  PolyChain to_chain() const {
    std::vector<Edge> edges;
    for (const auto& [key, m] : pieces_)
      if (std::abs(m) > 1e-14 * scale_) edges.push_back({key.first, key.second, m});
    return PolyChain(reps_, std::move(edges)).compacted();
  }

 private:
  int cluster_of(const Point& p) {
    for (int r = 0; r < static_cast<int>(reps_.size()); ++r)
      if ((reps_[r] - p).norm() <= tol_) return r;
    reps_.push_back(p);
    return static_cast<int>(reps_.size()) - 1;
  }

  void add_piece(int p, int q, double m) {
    if (p == q) return;
    scale_ = std::max(scale_, std::abs(m));
    if (p < q)
      pieces_[{p, q}] += m;
    else
      pieces_[{q, p}] -= m;
  }

  double tol_;
  double scale_ = 0.0;
  std::vector<Point> reps_;
  std::map<std::pair<int, int>, double> pieces_;
};

Refinement refine_both(const PolyChain& a, const PolyChain& b, double sign_b, double tol) {
  Refinement ref(tol);
  ref.add_points(a.vertices());
  ref.add_points(b.vertices());
  ref.add_chain(a, 1.0);
  ref.add_chain(b, sign_b);
  return ref;
}

}  // namespace

PolyChain::PolyChain(std::vector<Point> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)) {
  if (!vertices_.empty()) {
    const auto d = vertices_.front().size();
    for (const auto& v : vertices_) {
      require_finite(v);
      if (v.size() != d) throw DomainError("PolyChain: vertices of different dimension");
    }
  }
  const int n = static_cast<int>(vertices_.size());
  for (const auto& e : edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw DomainError("PolyChain: edge references a missing vertex");
    if (e.tail == e.head) throw DomainError("PolyChain: edge with tail == head");
    if (!std::isfinite(e.multiplicity)) throw DomainError("PolyChain: non-finite multiplicity");
  }
  edges_ = consolidate(std::move(edges));
}

int PolyChain::dim() const {
  return vertices_.empty() ? 0 : static_cast<int>(vertices_.front().size());
}

double PolyChain::edge_length(const Edge& e) const {
  return (vertex(e.head) - vertex(e.tail)).norm();
}

PolyChain PolyChain::scaled(double factor) const {
  std::vector<Edge> e(edges_.begin(), edges_.end());
  for (auto& x : e) x.multiplicity *= factor;
  return PolyChain(vertices_, std::move(e));
}

PolyChain PolyChain::oriented() const {
  std::vector<Edge> e(edges_.begin(), edges_.end());
  for (auto& x : e)
    if (x.multiplicity < 0.0) x = {x.head, x.tail, -x.multiplicity};
  return PolyChain(vertices_, std::move(e));
}

PolyChain PolyChain::compacted() const {
  std::vector<int> remap(vertices_.size(), -1);
  std::vector<Point> v;
  for (const auto& e : edges_)
    for (int id : {e.tail, e.head})
      if (remap[id] < 0) {
        remap[id] = static_cast<int>(v.size());
        v.push_back(vertices_[id]);
      }
  std::vector<Edge> e;
  for (const auto& x : edges_) e.push_back({remap[x.tail], remap[x.head], x.multiplicity});
  return PolyChain(std::move(v), std::move(e));
}

AtomicMeasure boundary(const PolyChain& chain) {
  std::vector<double> net(chain.vertex_count(), 0.0);
  for (const auto& e : chain.edges()) {
    net[e.head] += e.multiplicity;
    net[e.tail] -= e.multiplicity;
  }
  std::vector<Atom> atoms;
  const double scale = max_abs_multiplicity(chain.edges());
  for (std::size_t i = 0; i < net.size(); ++i)
    if (std::abs(net[i]) > 1e-14 * scale) atoms.push_back({chain.vertex(static_cast<int>(i)), net[i]});
  return AtomicMeasure(std::move(atoms));
}

bool validate_kirchhoff(const PolyChain& chain, const AtomicMeasure& mu_minus,
                        const AtomicMeasure& mu_plus, double tol) {
  if (std::abs(mass(mu_minus) - mass(mu_plus)) > tol) return false;
  const AtomicMeasure diff = boundary(chain) - (mu_plus - mu_minus);
  for (const auto& a : diff.atoms())
    if (std::abs(a.weight) > tol) return false;
  return true;
}

double mass(const PolyChain& chain) {
  double s = 0.0;
  for (const auto& e : chain.edges()) s += std::abs(e.multiplicity) * chain.edge_length(e);
  return s;
}

double alpha_mass(const PolyChain& chain, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha_mass: alpha must lie in [0,1]");
  double s = 0.0;
  for (const auto& e : chain.edges()) s += std::pow(std::abs(e.multiplicity), alpha) * chain.edge_length(e);
  return s;
}

bool is_tree(const PolyChain& chain) {
  UnionFind uf(chain.vertex_count());
  for (const auto& e : chain.edges())
    if (!uf.unite(e.tail, e.head)) return false;
  return true;
}

bool has_cycle(const PolyChain& chain) {
  const std::size_t n = chain.vertex_count();
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (const auto& e : chain.edges()) {
    const int from = e.multiplicity > 0 ? e.tail : e.head;
    const int to = e.multiplicity > 0 ? e.head : e.tail;
    out[from].push_back(to);
    ++indeg[to];
  }
  // Kahn: a directed cycle leaves vertices that are never released.
  std::vector<int> stack;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
  std::size_t seen = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int w : out[v])
      if (--indeg[w] == 0) stack.push_back(w);
  }
  return seen != n;
}

std::vector<std::string> validated_form_issues(const PolyChain& chain, double tol) {
  std::vector<std::string> issues;
  const auto edges = chain.edges();
  std::vector<char> used(chain.vertex_count(), 0);
  for (const auto& e : edges) used[e.tail] = used[e.head] = 1;

  for (std::size_t i = 0; i < chain.vertex_count(); ++i) {
    if (!used[i]) continue;
    for (std::size_t j = i + 1; j < chain.vertex_count(); ++j)
      if (used[j] && distance(chain.vertex(int(i)), chain.vertex(int(j))) <= tol)
        issues.push_back("vertices " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  }

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Point& a = chain.vertex(edges[i].tail);
    const Point& b = chain.vertex(edges[i].head);
    for (std::size_t v = 0; v < chain.vertex_count(); ++v) {
      if (!used[v] || int(v) == edges[i].tail || int(v) == edges[i].head) continue;
      if (point_segment_distance(chain.vertex(int(v)), a, b) <= tol)
        issues.push_back("vertex " + std::to_string(v) + " lies on edge " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Point& c = chain.vertex(edges[j].tail);
      const Point& d = chain.vertex(edges[j].head);
      int shared = -1;
      int far_i = -1;
      int far_j = -1;
      for (int x : {edges[i].tail, edges[i].head})
        for (int y : {edges[j].tail, edges[j].head})
          if (x == y) {
            shared = x;
            far_i = (x == edges[i].tail) ? edges[i].head : edges[i].tail;
            far_j = (y == edges[j].tail) ? edges[j].head : edges[j].tail;
          }
      bool meet = false;
      if (shared >= 0) {
        const Point& s = chain.vertex(shared);
        meet = point_segment_distance(chain.vertex(far_i), s, chain.vertex(far_j)) <= tol ||
               point_segment_distance(chain.vertex(far_j), s, chain.vertex(far_i)) <= tol;
      } else {
        meet = segment_segment_distance(a, b, c, d) <= tol;
      }
      if (meet) issues.push_back("edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  }
  return issues;
}

std::vector<WeightedPath> path_decomposition(const PolyChain& chain) {
  if (const auto issues = validated_form_issues(chain); !issues.empty())
    throw PreconditionError("path_decomposition: chain not in validated form (" + issues.front() + ")");
  if (has_cycle(chain)) throw DecompositionError("path_decomposition: chain has an oriented cycle");

  const PolyChain t = chain.oriented();
  const std::size_t n = t.vertex_count();
  const auto edges = t.edges();
  const double scale = std::max(max_abs_multiplicity(edges), 1e-300);
  const double tol = 1e-12 * scale;

  std::vector<double> residual(edges.size());
  std::vector<std::vector<int>> out(n);
  std::vector<double> supply(n, 0.0);
  std::vector<double> demand(n, 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    residual[i] = edges[i].multiplicity;
    out[edges[i].tail].push_back(static_cast<int>(i));
    supply[edges[i].tail] += edges[i].multiplicity;
    demand[edges[i].head] += edges[i].multiplicity;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const double net = demand[v] - supply[v];
    supply[v] = std::max(-net, 0.0);
    demand[v] = std::max(net, 0.0);
    if (supply[v] <= tol) supply[v] = 0.0;
    if (demand[v] <= tol) demand[v] = 0.0;
  }

  std::vector<WeightedPath> paths;
  for (std::size_t guard = 0; guard < 4 * (edges.size() + n) + 4; ++guard) {
    int start = -1;
    for (std::size_t v = 0; v < n; ++v)
      if (supply[v] > 0.0) {
        start = static_cast<int>(v);
        break;
      }
    if (start < 0) break;

    WeightedPath p;
    p.vertices.push_back(start);
    std::vector<int> used_edges;
    int v = start;
    double w = supply[start];
    while (demand[v] <= 0.0 || v == start) {
      int best = -1;
      for (int id : out[v])
        if (residual[id] > 0.0 && (best < 0 || residual[id] > residual[best])) best = id;
      if (best < 0) {
        if (demand[v] > 0.0) break;
        throw DecompositionError("path_decomposition: flow cannot be followed without cancellation");
      }
      used_edges.push_back(best);
      w = std::min(w, residual[best]);
      v = edges[best].head;
      p.vertices.push_back(v);
      if (p.vertices.size() > n + 1) throw DecompositionError("path_decomposition: walk did not terminate");
    }
    w = std::min(w, demand[v]);
    if (used_edges.empty() || !(w > 0.0)) throw DecompositionError("path_decomposition: degenerate path");
    for (int id : used_edges) {
      residual[id] -= w;
      if (residual[id] <= tol) residual[id] = 0.0;
    }
    supply[start] -= w;
    if (supply[start] <= tol) supply[start] = 0.0;
    demand[v] -= w;
    if (demand[v] <= tol) demand[v] = 0.0;
    // Report paths in the caller's vertex numbering (same as `chain`).
    p.weight = w;
    paths.push_back(std::move(p));
  }
  for (double r : residual)
    if (r > 0.0) throw DecompositionError("path_decomposition: residual flow left after decomposition");
  return paths;
}

PolyChain sum_paths(std::span<const Point> vertices, std::span<const WeightedPath> paths) {
  std::vector<Edge> edges;
  for (const auto& p : paths)
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
      edges.push_back({p.vertices[i], p.vertices[i + 1], p.weight});
  return PolyChain(std::vector<Point>(vertices.begin(), vertices.end()), std::move(edges));
}

QuantizedChain quantize_chain(const PolyChain& chain, double eps) {
  if (!(eps > 0.0)) throw DomainError("quantize_chain: eps must be positive");
  const PolyChain t = chain.oriented();
  const std::size_t n_edges = t.edge_count();
  QuantizedChain out;
  if (n_edges == 0) {
    out.chain = t;
    out.eta = eps / 16.0;
    return out;
  }
  const double eta = eps / (16.0 * static_cast<double>(n_edges));
  std::vector<Edge> edges;
  for (const auto& e : t.edges()) {
    const double q = e.multiplicity / eta;
    // A ratio within rounding of an integer counts as that integer, but the
    // result never exceeds the original multiplicity.
    double m = std::floor(q);
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) m = r;
    double theta = m * eta;
    if (theta > e.multiplicity) theta = e.multiplicity;
    if (theta > 0.0) edges.push_back({e.tail, e.head, theta});
  }
  out.chain = PolyChain(std::vector<Point>(t.vertices().begin(), t.vertices().end()), std::move(edges));
  out.eta = eta;
  return out;
}

double alpha_mass_in_ball(const PolyChain& chain, const Point& x, double r, double alpha) {
  double s = 0.0;
  for (const auto& e : chain.edges())
    s += std::pow(std::abs(e.multiplicity), alpha) *
         segment_ball_length(chain.vertex(e.tail), chain.vertex(e.head), x, r);
  return s;
}

std::vector<double> monotonicity_profile(const PolyChain& chain, const Point& x,
                                         std::span<const double> radii, double alpha) {
  if (chain.empty()) throw DomainError("monotonicity_profile: empty chain");
  if (x.size() != chain.dim()) throw DomainError("monotonicity_profile: dimension mismatch");
  double scale = 0.0;
  for (const auto& v : chain.vertices()) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  double on_support = std::numeric_limits<double>::infinity();
  for (const auto& e : chain.edges())
    on_support = std::min(on_support, point_segment_distance(x, chain.vertex(e.tail), chain.vertex(e.head)));
  if (on_support > 1e-9 * (1.0 + scale)) throw DomainError("monotonicity_profile: point is not on the support");

  double to_boundary = std::numeric_limits<double>::infinity();
  const AtomicMeasure bd = boundary(chain);
  for (const auto& a : bd.atoms()) to_boundary = std::min(to_boundary, distance(a.position, x));
  if (!(to_boundary > 0.0)) throw DomainError("monotonicity_profile: point is a boundary atom");

  double prev = 0.0;
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r > prev)) throw DomainError("monotonicity_profile: radii must be positive and increasing");
    if (!(r < to_boundary)) throw DomainError("monotonicity_profile: radius reaches the boundary support");
    out.push_back(alpha_mass_in_ball(chain, x, r, alpha) / r);
    prev = r;
  }
  return out;
}

bool is_nondecreasing(std::span<const double> values, double tol) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1] - tol) return false;
  return true;
}

PolyChain refine(const PolyChain& chain, double merge_tol) {
  Refinement ref(merge_tol);
  ref.add_points(chain.vertices());
  ref.add_chain(chain, 1.0);
  return ref.to_chain();
}

PolyChain add(const PolyChain& a, const PolyChain& b, double merge_tol) {
  return refine_both(a, b, 1.0, merge_tol).to_chain();
}

double flat_upper(const PolyChain& a, const PolyChain& b, double merge_tol) {
  return mass(refine_both(a, b, -1.0, merge_tol).to_chain());
}

bool same_current(const PolyChain& a, const PolyChain& b, double merge_tol, double weight_tol) {
  const double scale = std::max({max_abs_multiplicity(a.edges()), max_abs_multiplicity(b.edges()), 1e-300});
  const auto diff = refine_both(a, b, -1.0, merge_tol);
  for (const auto& [key, m] : diff.pieces())
    if (std::abs(m) > weight_tol * scale) return false;
  return true;
}

bool same_support(const PolyChain& a, const PolyChain& b, double merge_tol, double weight_tol) {
  Refinement ra(merge_tol);
  ra.add_points(a.vertices());
  ra.add_points(b.vertices());
  Refinement rb = ra;
  ra.add_chain(a, 1.0);
  rb.add_chain(b, 1.0);
  auto keys = [weight_tol](const Refinement& r) {
    std::vector<std::pair<int, int>> k;
    const double s = std::max(r.scale(), 1e-300);
    for (const auto& [key, m] : r.pieces())
      if (std::abs(m) > weight_tol * s) k.push_back(key);
    return k;
  };
  return keys(ra) == keys(rb);
}

std::vector<int> branch_vertices(const PolyChain& chain, double tol) {
  std::vector<int> degree(chain.vertex_count(), 0);
  std::vector<double> net(chain.vertex_count(), 0.0);
  double scale = 0.0;
  for (const auto& e : chain.edges()) {
    ++degree[e.tail];
    ++degree[e.head];
    net[e.head] += e.multiplicity;
    net[e.tail] -= e.multiplicity;
    scale = std::max(scale, std::abs(e.multiplicity));
  }
  std::vector<int> out;
  for (std::size_t v = 0; v < degree.size(); ++v)
    if (degree[v] >= 3 && std::abs(net[v]) <= tol * std::max(scale, 1.0)) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace ramulus
