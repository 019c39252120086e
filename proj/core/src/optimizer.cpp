#include "ramulus/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ramulus/errors.hpp"

namespace ramulus {

namespace {

struct CostEdge {
  int u;
  int v;
  double c;
};

// Flattened view of a placement problem: terminal coordinates are constant,
// Steiner coordinates are rows of X.
class Model {
 public:
  explicit Model(const PlacementProblem& p) : p_(p) {
    check_problem(p);
    n_ = p.topology.n_terminals();
    s_ = p.topology.steiner_count();
    d_ = static_cast<int>(p.terminals.front().size());
    const auto edges = p.topology.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
      edges_.push_back({edges[i].first, edges[i].second, edge_cost(p.flows[i], p.alpha)});
    scale_ = diameter(p.terminals);
    if (!(scale_ > 0.0)) scale_ = 1.0;
  }

  int s() const { return s_; }
  int d() const { return d_; }
  double scale() const { return scale_; }
  const std::vector<CostEdge>& edges() const { return edges_; }

  Eigen::VectorXd pos(const Eigen::MatrixXd& X, int v) const {
    return v < n_ ? p_.terminals[v] : Eigen::VectorXd(X.row(v - n_).transpose());
  }
  // Terminal part of the difference x_v - x_u.
  Eigen::VectorXd constant(const CostEdge& e) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d_);
    if (e.v < n_) g += p_.terminals[e.v];
    if (e.u < n_) g -= p_.terminals[e.u];
    return g;
  }

  double value(const Eigen::MatrixXd& X) const {
    double f = 0.0;
    for (const auto& e : edges_)
      if (e.c > 0.0) f += e.c * (pos(X, e.v) - pos(X, e.u)).norm();
    return f;
  }

  double smoothed(const Eigen::MatrixXd& X, double eps) const {
    double f = 0.0;
    for (const auto& e : edges_)
      if (e.c > 0.0) f += e.c * std::sqrt((pos(X, e.v) - pos(X, e.u)).squaredNorm() + eps * eps);
    return f;
  }

  Eigen::MatrixXd gradient(const Eigen::MatrixXd& X, double eps) const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s_, d_);
    for (const auto& e : edges_) {
      if (e.c == 0.0) continue;
      const Eigen::VectorXd diff = pos(X, e.v) - pos(X, e.u);
      const Eigen::VectorXd y = e.c * diff / std::sqrt(diff.squaredNorm() + eps * eps);
      if (e.v >= n_) g.row(e.v - n_) += y.transpose();
      if (e.u >= n_) g.row(e.u - n_) -= y.transpose();
    }
    return g;
  }

  // Subgradient of the nonsmooth objective (zero on coincident endpoints).
  Eigen::MatrixXd subgradient(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s_, d_);
    for (const auto& e : edges_) {
      if (e.c == 0.0) continue;
      const Eigen::VectorXd diff = pos(X, e.v) - pos(X, e.u);
      const double len = diff.norm();
      if (len == 0.0) continue;
      const Eigen::VectorXd y = e.c * diff / len;
      if (e.v >= n_) g.row(e.v - n_) += y.transpose();
      if (e.u >= n_) g.row(e.u - n_) -= y.transpose();
    }
    return g;
  }

  // One reweighting step: minimize sum_e w_e |x_v - x_u|^2 with
  // w_e = c_e / sqrt(|d_e|^2 + eps^2). eps = infinity uses w_e = c_e.
  Eigen::MatrixXd reweight(const Eigen::MatrixXd& X, double eps) const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s_, s_);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(s_, d_);
    double wmax = 0.0;
    for (const auto& e : edges_) {
      if (e.c == 0.0) continue;
      const double w = std::isinf(eps) ? e.c : e.c / std::sqrt((pos(X, e.v) - pos(X, e.u)).squaredNorm() + eps * eps);
      wmax = std::max(wmax, w);
      const bool sv = e.v >= n_;
      const bool su = e.u >= n_;
      if (sv) A(e.v - n_, e.v - n_) += w;
      if (su) A(e.u - n_, e.u - n_) += w;
      if (sv && su) {
        A(e.v - n_, e.u - n_) -= w;
        A(e.u - n_, e.v - n_) -= w;
      } else if (sv) {
        B.row(e.v - n_) += w * p_.terminals[e.u].transpose();
      } else if (su) {
        B.row(e.u - n_) += w * p_.terminals[e.v].transpose();
      }
    }
    // A tiny proximal term keeps Steiner vertices without costly edges in
    // place and the system definite; it vanishes at fixed points.
    const double ridge = 1e-13 * std::max(wmax, 1.0);
    for (int i = 0; i < s_; ++i) {
      A(i, i) += ridge;
      B.row(i) += ridge * X.row(i);
    }
    return A.ldlt().solve(B);
  }

  // Newton step on the smoothed objective (variables flattened row-major).
  Eigen::MatrixXd newton(const Eigen::MatrixXd& X, double eps) const {
    const int nv = s_ * d_;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nv, nv);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nv);
    double hmax = 0.0;
    for (const auto& e : edges_) {
      if (e.c == 0.0) continue;
      const Eigen::VectorXd diff = pos(X, e.v) - pos(X, e.u);
      const double r = std::sqrt(diff.squaredNorm() + eps * eps);
      const Eigen::VectorXd y = e.c * diff / r;
      const Eigen::MatrixXd h =
          (e.c / r) * (Eigen::MatrixXd::Identity(d_, d_) - diff * diff.transpose() / (r * r));
      hmax = std::max(hmax, e.c / r);
      const int iv = e.v >= n_ ? (e.v - n_) * d_ : -1;
      const int iu = e.u >= n_ ? (e.u - n_) * d_ : -1;
      if (iv >= 0) {
        g.segment(iv, d_) += y;
        H.block(iv, iv, d_, d_) += h;
      }
      if (iu >= 0) {
        g.segment(iu, d_) -= y;
        H.block(iu, iu, d_, d_) += h;
      }
      if (iv >= 0 && iu >= 0) {
        H.block(iv, iu, d_, d_) -= h;
        H.block(iu, iv, d_, d_) -= h;
      }
    }
    H.diagonal().array() += 1e-14 * std::max(hmax, 1.0);
    const Eigen::VectorXd step = H.ldlt().solve(g);
    Eigen::MatrixXd out = X;
    for (int i = 0; i < s_; ++i) out.row(i) -= step.segment(i * d_, d_).transpose();
    return out;
  }

  // Feasible dual point built from the (smoothed) edge forces at X. Edges
  // shorter than `free_len` start without force: their direction carries no
  // information. The forces are then projected onto the equilibrium
  // constraint in two stages: clusters joined by free edges are balanced
  // through the remaining edges (least squares weighted by cost), after
  // which each cluster settles its internal residuals along its free edges.
  // Finally the forces are scaled into the capacity balls. Returns the dual
  // objective, a lower bound on min F.
  double dual(const Eigen::MatrixXd& X, double eps, double free_len) const {
    const std::size_t m = edges_.size();
    const int total = n_ + s_;
    std::vector<Eigen::VectorXd> y(m, Eigen::VectorXd::Zero(d_));
    std::vector<char> free(m, 0);
    std::vector<int> cluster(static_cast<std::size_t>(total));
    for (int v = 0; v < total; ++v) cluster[v] = v;
    auto find = [&](int x) {
      while (cluster[x] != x) x = cluster[x];
      return x;
    };
    for (std::size_t i = 0; i < m; ++i) {
      const auto& e = edges_[i];
      if (e.c == 0.0) continue;
      const Eigen::VectorXd diff = pos(X, e.v) - pos(X, e.u);
      const double len = diff.norm();
      if (len <= free_len) {
        free[i] = 1;
        const int a = find(e.u);
        const int b = find(e.v);
        if (a != b) cluster[std::max(a, b)] = std::min(a, b);
      } else {
        y[i] = e.c * diff / std::sqrt(len * len + eps * eps);
      }
    }
    // Clusters rooted at a terminal (root id < n) absorb any force.
    std::vector<int> root(static_cast<std::size_t>(total));
    for (int v = 0; v < total; ++v) root[v] = find(v);

    auto residual = [&]() {
      Eigen::MatrixXd r = Eigen::MatrixXd::Zero(total, d_);
      for (std::size_t i = 0; i < m; ++i) {
        r.row(edges_[i].v) += y[i].transpose();
        r.row(edges_[i].u) -= y[i].transpose();
      }
      return r;
    };

    // Stage 1: balance free clusters through the non-free edges.
    std::vector<int> slot(static_cast<std::size_t>(total), -1);
    int k = 0;
    for (int v = n_; v < total; ++v)
      if (root[v] == v) slot[v] = k++;
    if (k > 0) {
      const Eigen::MatrixXd r = residual();
      Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k, d_);
      for (int v = n_; v < total; ++v)
        if (slot[root[v]] >= 0) R.row(slot[root[v]]) += r.row(v);
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
      for (std::size_t i = 0; i < m; ++i) {
        if (free[i] || edges_[i].c == 0.0) continue;
        const int a = slot[root[edges_[i].u]];
        const int b = slot[root[edges_[i].v]];
        const double c = edges_[i].c;
        if (a >= 0) L(a, a) += c;
        if (b >= 0) L(b, b) += c;
        if (a >= 0 && b >= 0) {
          L(a, b) -= c;
          L(b, a) -= c;
        }
      }
      const Eigen::MatrixXd z = L.completeOrthogonalDecomposition().solve(-R);
      for (std::size_t i = 0; i < m; ++i) {
        if (free[i] || edges_[i].c == 0.0) continue;
        const int a = slot[root[edges_[i].u]];
        const int b = slot[root[edges_[i].v]];
        Eigen::VectorXd dz = Eigen::VectorXd::Zero(d_);
        if (b >= 0) dz += z.row(b).transpose();
        if (a >= 0) dz -= z.row(a).transpose();
        y[i] += edges_[i].c * dz;
      }
    }

    // Stage 2: strip leaves of each free cluster towards its root.
    {
      Eigen::MatrixXd r = residual();
      std::vector<std::vector<int>> inc(static_cast<std::size_t>(total));
      std::vector<int> degree(static_cast<std::size_t>(total), 0);
      for (std::size_t i = 0; i < m; ++i)
        if (free[i]) {
          inc[edges_[i].u].push_back(static_cast<int>(i));
          inc[edges_[i].v].push_back(static_cast<int>(i));
          ++degree[edges_[i].u];
          ++degree[edges_[i].v];
        }
      std::vector<char> used(m, 0);
      std::vector<int> stack;
      for (int v = 0; v < total; ++v)
        if (degree[v] == 1 && root[v] != v) stack.push_back(v);
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (degree[v] != 1 || root[v] == v) continue;
        int id = -1;
        for (int i : inc[v])
          if (!used[i]) id = i;
        used[id] = 1;
        const auto& e = edges_[id];
        const int other = e.u == v ? e.v : e.u;
        // Terminals need no balance; Steiner vertices are zeroed.
        Eigen::VectorXd dy = Eigen::VectorXd::Zero(d_);
        if (v >= n_) dy = e.v == v ? Eigen::VectorXd(-r.row(v).transpose()) : Eigen::VectorXd(r.row(v).transpose());
        y[id] += dy;
        r.row(e.v) += dy.transpose();
        r.row(e.u) -= dy.transpose();
        --degree[v];
        if (--degree[other] == 1 && root[other] != other) stack.push_back(other);
      }
      double cmax = 0.0;
      for (const auto& e : edges_) cmax = std::max(cmax, e.c);
      for (int v = n_; v < total; ++v)
        if (r.row(v).cwiseAbs().maxCoeff() > 1e-12 * std::max(cmax, 1e-300))
          return -std::numeric_limits<double>::infinity();
    }

    double lambda = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double ny = y[i].norm();
      if (ny > edges_[i].c) lambda = std::min(lambda, edges_[i].c / ny);
    }
    double bound = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (edges_[i].c > 0.0) bound += y[i].dot(constant(edges_[i]));
    return lambda * bound;
  }

  // Best of the dual constructions over a few free-edge thresholds, with
  // smoothed and with exact edge directions.
  // Best bound over a few constructions; stops early once `enough` is
  // reached. Free-length thresholds selecting the same free edges as a
  // smaller one are skipped.
  double bound(const Eigen::MatrixXd& X, double eps,
               double enough = std::numeric_limits<double>::infinity()) const {
    std::vector<double> lengths;
    for (const auto& e : edges_)
      if (e.c != 0.0) lengths.push_back((pos(X, e.v) - pos(X, e.u)).norm());
    double best = -std::numeric_limits<double>::infinity();
    for (double smoothing : {eps, 0.0}) {
      long last = -1;
      for (double f : {0.0, 1e-9, 1e-7, 1e-5}) {
        const long count = std::count_if(lengths.begin(), lengths.end(), [&](double l) { return l <= f * scale_; });
        if (count == last) continue;
        last = count;
        best = std::max(best, dual(X, smoothing, f * scale_));
        if (best >= enough) return best;
      }
    }
    return best;
  }

 private:
  const PlacementProblem& p_;
  int n_ = 0;
  int s_ = 0;
  int d_ = 0;
  double scale_ = 1.0;
  std::vector<CostEdge> edges_;
};

Eigen::MatrixXd to_matrix(std::span<const Point> pts, int d) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != d) throw DomainError("placement: Steiner position of wrong dimension");
    X.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  }
  return X;
}

std::vector<Point> to_points(const Eigen::MatrixXd& X) {
  std::vector<Point> out;
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.emplace_back(X.row(i).transpose());
  return out;
}

Eigen::MatrixXd checked_matrix(const Model& m, std::span<const Point> steiner) {
  if (static_cast<int>(steiner.size()) != m.s()) throw DomainError("placement: wrong number of Steiner positions");
  return to_matrix(steiner, m.d());
}

}  // namespace

void check_problem(const PlacementProblem& p) {
  const auto& t = p.topology;
  if (static_cast<int>(p.terminals.size()) != t.n_terminals())
    throw DomainError("placement: terminal count does not match the topology");
  if (p.flows.size() != t.edges().size()) throw DomainError("placement: one flow per edge required");
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw DomainError("placement: alpha must lie in [0,1]");
  for (double f : p.flows)
    if (!std::isfinite(f)) throw DomainError("placement: non-finite flow");
  const auto d = p.terminals.front().size();
  for (const auto& x : p.terminals) {
    require_finite(x);
    if (x.size() != d) throw DomainError("placement: terminals of different dimension");
  }
}

double edge_cost(double flow, double alpha) {
  return flow == 0.0 ? 0.0 : std::pow(std::abs(flow), alpha);
}

double placement_objective(const PlacementProblem& p, std::span<const Point> steiner) {
  const Model m(p);
  return m.value(checked_matrix(m, steiner));
}

double smoothed_objective(const PlacementProblem& p, std::span<const Point> steiner, double eps) {
  const Model m(p);
  return m.smoothed(checked_matrix(m, steiner), eps);
}

Eigen::MatrixXd smoothed_gradient(const PlacementProblem& p, std::span<const Point> steiner, double eps) {
  const Model m(p);
  return m.gradient(checked_matrix(m, steiner), eps);
}

double dual_bound(const PlacementProblem& p, std::span<const Point> steiner, double eps) {
  const Model m(p);
  return m.bound(checked_matrix(m, steiner), eps);
}

PlacementResult minimize_placement(const PlacementProblem& p, double tol, int max_iter) {
  const Model m(p);
  PlacementResult res;
  const double scale = m.scale();

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(m.s(), m.d());
  if (m.s() > 0) {
    // Start from the flow-weighted harmonic extension of the terminals.
    Eigen::MatrixXd start = Eigen::MatrixXd::Zero(m.s(), m.d());
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m.d());
    for (const auto& t : p.terminals) centroid += t;
    centroid /= static_cast<double>(p.terminals.size());
    for (int i = 0; i < m.s(); ++i) start.row(i) = centroid.transpose();
    X = m.reweight(start, std::numeric_limits<double>::infinity());
  }

  Eigen::MatrixXd best = X;
  double best_value = m.value(X);
  double best_bound = m.s() == 0 ? best_value : -std::numeric_limits<double>::infinity();
  int iter = 0;
  auto certified = [&]() { return best_value - best_bound <= tol * (1.0 + best_value); };
  // Iterating a little past the requested tolerance keeps positions accurate
  // enough for certificates of problems derived from this one.
  auto polished = [&]() { return best_value - best_bound <= 1e-2 * tol * (1.0 + best_value); };
  auto record = [&](const Eigen::MatrixXd& Y, double eps) {
    const double v = m.value(Y);
    if (v < best_value) {
      best_value = v;
      best = Y;
    }
    best_bound = std::max(best_bound, m.bound(Y, eps, best_value - 1e-2 * tol * (1.0 + best_value)));
  };

  if (m.s() > 0) {
    record(X, 1e-3 * scale);
    for (double eps = 1e-3 * scale; !polished() && eps >= 1e-12 * scale * 0.999 && iter < max_iter; eps *= 0.1) {
      double prev = m.smoothed(X, eps);
      for (int k = 0; k < 500 && iter < max_iter; ++k) {
        // Reweighting always descends; a Newton step replaces it when it
        // does better, which restores fast local convergence.
        Eigen::MatrixXd next = m.reweight(X, eps);
        double cur = m.smoothed(next, eps);
        const Eigen::MatrixXd full = m.newton(X, eps);
        if (full.allFinite()) {
          // Backtracking along the Newton direction.
          const Eigen::MatrixXd dir = full - X;
          for (double t = 1.0; t > 1e-6; t *= 0.25) {
            const Eigen::MatrixXd trial = X + t * dir;
            const double ft = m.smoothed(trial, eps);
            if (ft < prev) {
              if (ft < cur) {
                next = trial;
                cur = ft;
              }
              break;
            }
          }
        }
        ++iter;
        if (!(cur < prev)) break;
        X = next;
        record(X, eps);
        if (polished()) break;
        if (prev - cur <= 1e-16 * cur) break;
        prev = cur;
      }
    }
    // Edges that shrank to (almost) nothing are contracted and the smaller
    // problem solved; its optimum, expanded back, carries an exact
    // certificate when the contracted edges are the ones with zero length at
    // the optimum. The shortest edges are tried in growing sets.
    if (!polished() && iter < max_iter) {
      const auto edges = p.topology.edges();
      const int n = p.topology.n_terminals();
      const int total = p.topology.vertex_count();
      std::vector<std::pair<double, int>> short_edges;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [a, b] = edges[i];
        if (a < n && b < n) continue;
        const double len = (m.pos(best, a) - m.pos(best, b)).norm();
        if (len <= 1e-3 * scale) short_edges.emplace_back(len, static_cast<int>(i));
      }
      std::sort(short_edges.begin(), short_edges.end());
      const Eigen::MatrixXd start_best = best;
      for (std::size_t t = 1; t <= std::min<std::size_t>(short_edges.size(), 4) && !polished() && iter < max_iter; ++t) {
        std::vector<int> parent(static_cast<std::size_t>(total));
        for (int v = 0; v < total; ++v) parent[v] = v;
        auto find = [&](int x) {
          while (parent[x] != x) x = parent[x];
          return x;
        };
        bool valid = true;
        for (std::size_t j = 0; j < t; ++j) {
          const auto [a, b] = edges[short_edges[j].second];
          int ra = find(a);
          int rb = find(b);
          if (ra < n && rb < n) {
            valid = false;
            break;
          }
          if (rb < ra) std::swap(ra, rb);  // terminals (low ids) stay roots
          parent[rb] = ra;
        }
        if (!valid) break;
        std::vector<int> new_id(static_cast<std::size_t>(total), -1);
        int next = n;
        for (int v = 0; v < n; ++v) new_id[v] = v;
        for (int v = n; v < total; ++v)
          if (find(v) == v) new_id[v] = next++;
        std::vector<std::pair<int, int>> ce;
        std::vector<double> cf;
        for (std::size_t i = 0; i < edges.size(); ++i) {
          const int a = new_id[find(edges[i].first)];
          const int b = new_id[find(edges[i].second)];
          if (a == b) continue;
          ce.emplace_back(a, b);
          cf.push_back(p.flows[i]);
        }
        PlacementProblem sub{Topology(n, next - n, std::move(ce)), std::move(cf), p.terminals, p.alpha};
        const PlacementResult r = minimize_placement(sub, tol, max_iter - iter);
        iter += r.iterations;
        Eigen::MatrixXd Y(m.s(), m.d());
        for (int v = n; v < total; ++v) {
          const int id = new_id[find(v)];
          Y.row(v - n) = (id < n ? p.terminals[id] : r.steiner_positions[id - n]).transpose();
        }
        record(Y, 1e-12 * scale);
      }
    }
    // Polyak steps against the best lower bound when reweighting stalled.
    X = best;
    while (!certified() && iter < max_iter) {
      const Eigen::MatrixXd g = m.subgradient(X);
      const double g2 = g.squaredNorm();
      if (g2 == 0.0) break;
      const double f = m.value(X);
      X -= ((f - best_bound) / g2) * g;
      ++iter;
      record(X, 1e-10 * scale);
    }
  }

  res.steiner_positions = to_points(best);
  res.value = best_value;
  res.gap = std::max(0.0, best_value - best_bound);
  res.iterations = iter;
  res.converged = certified();

  const double merge = 1e-7 * scale;
  const int total = p.topology.vertex_count();
  for (int a = 0; a < total; ++a)
    for (int b = std::max(a + 1, p.topology.n_terminals()); b < total; ++b)
      if ((m.pos(best, a) - m.pos(best, b)).norm() <= merge) res.collapsed_pairs.emplace_back(a, b);
  return res;
}

PolyChain realize(const PlacementProblem& p, std::span<const Point> steiner) {
  check_problem(p);
  std::vector<Point> vertices(p.terminals.begin(), p.terminals.end());
  vertices.insert(vertices.end(), steiner.begin(), steiner.end());
  // Vertices at identical positions are identified so that collapsed
  // edges disappear without breaking conservation.
  std::vector<int> rep(vertices.size());
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    rep[v] = static_cast<int>(v);
    for (std::size_t u = 0; u < v; ++u)
      if (vertices[u] == vertices[v]) {
        rep[v] = rep[u];
        break;
      }
  }
  std::vector<Edge> edges;
  const auto topo_edges = p.topology.edges();
  for (std::size_t i = 0; i < topo_edges.size(); ++i) {
    const int a = rep[topo_edges[i].first];
    const int b = rep[topo_edges[i].second];
    if (p.flows[i] != 0.0 && a != b) edges.push_back({a, b, p.flows[i]});
  }
  return PolyChain(std::move(vertices), std::move(edges));
}

}  // namespace ramulus
