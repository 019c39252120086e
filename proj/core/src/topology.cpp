#include "ramulus/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ramulus/errors.hpp"

namespace ramulus {

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

std::vector<std::vector<int>> adjacency(int vertex_count, std::span<const std::pair<int, int>> edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertex_count));
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::string encode(const std::vector<std::vector<int>>& adj, int n, int v, int parent) {
  std::vector<std::string> children;
  for (int w : adj[v])
    if (w != parent) children.push_back(encode(adj, n, w, v));
  std::sort(children.begin(), children.end());
  std::string out = v < n ? "t" + std::to_string(v) : "S";
  out += '(';
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += ',';
    out += children[i];
  }
  out += ')';
  return out;
}

void mark_component(const std::vector<std::vector<int>>& adj, int root, std::vector<char>& seen) {
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
}

// Partial topology used during generation: n terminals, s Steiner vertices
// numbered n..n+s-1.
struct Proto {
  int n;
  int s;
  EdgeList edges;
};

// Renumbers Steiner vertices one slot up to make room for terminal n.
Proto with_new_terminal(const Proto& p) {
  Proto q{p.n + 1, p.s, p.edges};
  for (auto& [a, b] : q.edges) {
    if (a >= p.n) ++a;
    if (b >= p.n) ++b;
  }
  return q;
}

}  // namespace

std::string canonical_code(int n_terminals, int steiner_count, std::span<const std::pair<int, int>> edges) {
  const int total = n_terminals + steiner_count;
  const auto adj = adjacency(total, edges);
  std::vector<char> seen(static_cast<std::size_t>(total), 0);
  std::string code;
  for (int t = 0; t < n_terminals; ++t) {
    if (seen[t]) continue;
    mark_component(adj, t, seen);
    if (!code.empty()) code += '|';
    code += encode(adj, n_terminals, t, -1);
  }
  return code;
}

Topology::Topology(int n_terminals, int steiner_count, std::vector<std::pair<int, int>> edges)
    : n_(n_terminals), s_(steiner_count), edges_(std::move(edges)) {
  if (n_ < 1 || s_ < 0) throw DomainError("Topology: bad vertex counts");
  const int total = n_ + s_;
  std::vector<int> parent(static_cast<std::size_t>(total));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> degree(static_cast<std::size_t>(total), 0);
  for (const auto& [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= total || b >= total || a == b) throw DomainError("Topology: invalid edge");
    const int ra = find(a);
    const int rb = find(b);
    if (ra == rb) throw DomainError("Topology: edges contain a cycle");
    parent[ra] = rb;
    ++degree[a];
    ++degree[b];
  }
  for (int v = n_; v < total; ++v)
    if (degree[v] < 3) throw DomainError("Topology: Steiner vertex of degree < 3");
  std::vector<char> has_terminal(static_cast<std::size_t>(total), 0);
  for (int t = 0; t < n_; ++t) has_terminal[find(t)] = 1;
  for (int v = n_; v < total; ++v)
    if (!has_terminal[find(v)]) throw DomainError("Topology: component without terminals");
  code_ = canonical_code(n_, s_, edges_);
}

bool Topology::is_connected() const {
  return static_cast<int>(edges_.size()) == vertex_count() - 1;
}

std::vector<Topology> enumerate_topologies(int n_terminals) {
  if (n_terminals < 2) throw DomainError("enumerate_topologies: need at least 2 terminals");
  std::vector<Proto> level{{2, 0, {{0, 1}}}};
  for (int t = 2; t < n_terminals; ++t) {
    std::set<std::string> codes;
    std::vector<Proto> next;
    auto keep = [&](Proto p) {
      if (codes.insert(canonical_code(p.n, p.s, p.edges)).second) next.push_back(std::move(p));
    };
    for (const Proto& base : level) {
      const Proto p = with_new_terminal(base);
      const int nt = base.n;  // label of the new terminal
      // Leaf attached to an existing vertex.
      for (int v = 0; v < p.n + p.s; ++v) {
        if (v == nt) continue;
        Proto q = p;
        q.edges.push_back({v, nt});
        keep(std::move(q));
      }
      for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto [a, b] = p.edges[i];
        // Edge subdivided by a new Steiner vertex carrying the new leaf.
        Proto q = p;
        const int st = q.n + q.s;
        ++q.s;
        q.edges[i] = {a, st};
        q.edges.push_back({st, b});
        q.edges.push_back({st, nt});
        keep(std::move(q));
        // Edge subdivided by the new terminal itself.
        Proto r = p;
        r.edges[i] = {a, nt};
        r.edges.push_back({nt, b});
        keep(std::move(r));
      }
      // A Steiner vertex becomes the new terminal.
      for (int st = p.n; st < p.n + p.s; ++st) {
        Proto q = p;
        for (auto& [a, b] : q.edges)
          for (int* v : {&a, &b}) {
            if (*v == st)
              *v = nt;
            else if (*v > st)
              --*v;
          }
        --q.s;
        keep(std::move(q));
      }
    }
    level = std::move(next);
  }
  std::vector<Topology> out;
  out.reserve(level.size());
  for (auto& p : level) out.emplace_back(p.n, p.s, std::move(p.edges));
  std::sort(out.begin(), out.end(), [](const Topology& a, const Topology& b) { return a.code() < b.code(); });
  return out;
}

std::vector<Topology> full_topologies(int n_terminals) {
  if (n_terminals < 2) throw DomainError("full_topologies: need at least 2 terminals");
  if (n_terminals == 2) return {Topology(2, 0, {{0, 1}})};
  // Terminals 0..n-1, Steiner ids allocated as n, n+1, ... from the start.
  const int n = n_terminals;
  std::vector<EdgeList> level{{{0, n}, {1, n}, {2, n}}};
  for (int t = 3; t < n; ++t) {
    std::vector<EdgeList> next;
    const int st = n + (t - 2);
    for (const auto& edges : level)
      for (std::size_t i = 0; i < edges.size(); ++i) {
        EdgeList e = edges;
        const auto [a, b] = e[i];
        e[i] = {a, st};
        e.push_back({st, b});
        e.push_back({st, t});
        next.push_back(std::move(e));
      }
    level = std::move(next);
  }
  std::vector<Topology> out;
  out.reserve(level.size());
  for (auto& e : level) out.emplace_back(n, n - 2, std::move(e));
  std::sort(out.begin(), out.end(), [](const Topology& a, const Topology& b) { return a.code() < b.code(); });
  return out;
}

std::vector<double> edge_flows(const Topology& t, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != t.n_terminals())
    throw DomainError("edge_flows: one weight per terminal required");
  const int total = t.vertex_count();
  const auto edges = t.edges();
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(total));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].first].push_back(static_cast<int>(i));
    incident[edges[i].second].push_back(static_cast<int>(i));
  }
  std::vector<double> need(static_cast<std::size_t>(total), 0.0);
  double scale = 0.0;
  for (int v = 0; v < t.n_terminals(); ++v) {
    if (!std::isfinite(weights[v])) throw DomainError("edge_flows: non-finite weight");
    need[v] = weights[v];
    scale += std::abs(weights[v]);
  }

  std::vector<int> degree(static_cast<std::size_t>(total));
  for (int v = 0; v < total; ++v) degree[v] = static_cast<int>(incident[v].size());
  std::vector<char> edge_done(edges.size(), 0);
  std::vector<double> flow(edges.size(), 0.0);
  std::vector<int> leaves;
  for (int v = 0; v < total; ++v)
    if (degree[v] == 1) leaves.push_back(v);

  // A leaf's remaining net demand must arrive through its last edge.
  while (!leaves.empty()) {
    const int v = leaves.back();
    leaves.pop_back();
    if (degree[v] != 1) continue;
    int e = -1;
    for (int id : incident[v])
      if (!edge_done[id]) e = id;
    edge_done[e] = 1;
    const int u = edges[e].first == v ? edges[e].second : edges[e].first;
    flow[e] = edges[e].second == v ? need[v] : -need[v];
    need[u] += need[v];
    need[v] = 0.0;
    --degree[v];
    if (--degree[u] == 1) leaves.push_back(u);
  }
  for (int v = 0; v < total; ++v)
    if (std::abs(need[v]) > 1e-10 * scale)
      throw DomainError("edge_flows: weights do not sum to zero on every component");
  return flow;
}

ReducedTopology reduce_zero_flows(const Topology& t, std::span<const double> flows, double tol) {
  struct E {
    int a;
    int b;
    double f;
    bool alive;
  };
  std::vector<E> es;
  const auto edges = t.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    es.push_back({edges[i].first, edges[i].second, flows[i], std::abs(flows[i]) > tol});

  const int n = t.n_terminals();
  const int total = t.vertex_count();
  std::vector<char> removed(static_cast<std::size_t>(total), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = n; v < total; ++v) {
      if (removed[v]) continue;
      std::vector<int> inc;
      for (std::size_t i = 0; i < es.size(); ++i)
        if (es[i].alive && (es[i].a == v || es[i].b == v)) inc.push_back(static_cast<int>(i));
      if (inc.size() >= 3) continue;
      changed = true;
      removed[v] = 1;
      if (inc.size() == 2) {
        E& e1 = es[inc[0]];
        E& e2 = es[inc[1]];
        const int x = e1.a == v ? e1.b : e1.a;
        const int y = e2.a == v ? e2.b : e2.a;
        const double into_v = e1.b == v ? e1.f : -e1.f;
        e1 = {x, y, into_v, true};
        e2.alive = false;
      } else {
        for (int i : inc) es[i].alive = false;
      }
    }
  }

  std::vector<int> remap(static_cast<std::size_t>(total), -1);
  int next = 0;
  for (int v = 0; v < total; ++v)
    if (!removed[v]) remap[v] = next++;
  EdgeList out_edges;
  ReducedTopology out;
  for (const auto& e : es)
    if (e.alive) {
      out_edges.push_back({remap[e.a], remap[e.b]});
      out.flows.push_back(e.f);
    }
  out.topology = Topology(n, next - n, std::move(out_edges));
  return out;
}

}  // namespace ramulus
