#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace oracle {

namespace {

std::vector<std::pair<int, int>> decode_pruefer(const std::vector<int>& seq, int total) {
  std::vector<int> degree(static_cast<std::size_t>(total), 1);
  for (int v : seq) ++degree[v];
  std::vector<std::pair<int, int>> edges;
  for (int v : seq) {
    for (int leaf = 0; leaf < total; ++leaf)
      if (degree[leaf] == 1) {
        edges.emplace_back(leaf, v);
        --degree[leaf];
        --degree[v];
        break;
      }
  }
  int u = -1;
  for (int w = 0; w < total; ++w)
    if (degree[w] == 1) {
      if (u < 0) {
        u = w;
      } else {
        edges.emplace_back(u, w);
        break;
      }
    }
  return edges;
}

// Vertices reachable from `start` without using the edge to `blocked`.
std::vector<int> side(int total, const std::vector<std::pair<int, int>>& edges, int start, int blocked) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(total));
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(static_cast<std::size_t>(total), 0);
  seen[start] = 1;
  seen[blocked] = 1;
  std::vector<int> stack{start}, out{start};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
        out.push_back(w);
      }
  }
  return out;
}

double norm2(double x, double y) { return std::sqrt(x * x + y * y); }

}  // namespace

std::string split_signature(int n, int s, const std::vector<std::pair<int, int>>& edges) {
  const int total = n + s;
  const unsigned long all = (1UL << n) - 1;
  std::vector<unsigned long> splits;
  for (const auto& [a, b] : edges) {
    unsigned long mask = 0;
    for (int v : side(total, edges, b, a))
      if (v < n) mask |= 1UL << v;
    if (mask & 1UL) mask = all & ~mask;
    splits.push_back(mask);
  }
  std::sort(splits.begin(), splits.end());
  std::string sig = std::to_string(n) + ":" + std::to_string(s) + ":";
  for (auto m : splits) sig += std::to_string(m) + ",";
  return sig;
}

std::vector<XTree> brute_force_trees(int n) {
  std::vector<XTree> out;
  std::set<std::string> seen;
  for (int s = 0; s <= std::max(0, n - 2); ++s) {
    const int total = n + s;
    if (total < 2) continue;
    const int len = total - 2;
    std::vector<int> seq(static_cast<std::size_t>(len), 0);
    while (true) {
      // Steiner vertices need degree >= 3: two or more occurrences.
      bool ok = true;
      for (int v = n; v < total && ok; ++v)
        ok = std::count(seq.begin(), seq.end(), v) >= 2;
      if (ok) {
        auto edges = decode_pruefer(seq, total);
        if (seen.insert(split_signature(n, s, edges)).second) out.push_back({n, s, std::move(edges)});
      }
      int i = 0;
      while (i < len && ++seq[i] == total) seq[i++] = 0;
      if (i == len) break;
    }
  }
  return out;
}

std::vector<double> split_flows(const XTree& t, const std::vector<double>& weights) {
  std::vector<double> flows;
  for (const auto& [a, b] : t.edges) {
    double behind = 0.0;
    for (int v : side(t.n + t.s, t.edges, a, b))
      if (v < t.n) behind += weights[v];
    // Sources carry negative weight; what they emit crosses towards b.
    flows.push_back(-behind);
  }
  return flows;
}

double flat_norm_by_bases(const std::vector<Vec>& positions, const std::vector<double>& weights) {
  std::vector<int> pos, neg;
  double mass_pos = 0.0, mass_neg = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0) {
      pos.push_back(static_cast<int>(i));
      mass_pos += weights[i];
    } else if (weights[i] < 0) {
      neg.push_back(static_cast<int>(i));
      mass_neg -= weights[i];
    }
  }
  if (pos.empty() && neg.empty()) return 0.0;
  const int rows = static_cast<int>(pos.size()) + 1;
  const int cols = static_cast<int>(neg.size()) + 1;
  std::vector<double> supply(static_cast<std::size_t>(rows)), demand(static_cast<std::size_t>(cols));
  for (int i = 0; i + 1 < rows; ++i) supply[i] = weights[pos[i]];
  supply[rows - 1] = mass_neg;
  for (int j = 0; j + 1 < cols; ++j) demand[j] = -weights[neg[j]];
  demand[cols - 1] = mass_pos;
  auto cost = [&](int i, int j) {
    if (i == rows - 1 && j == cols - 1) return 0.0;
    if (i == rows - 1 || j == cols - 1) return 1.0;
    return (positions[pos[i]] - positions[neg[j]]).norm();
  };

  const int cells = rows * cols;
  const int basis = rows + cols - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(basis));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    // Leaf stripping on the bipartite graph of the chosen cells.
    std::vector<double> s = supply, d = demand;
    std::vector<char> used(static_cast<std::size_t>(basis), 0);
    double total = 0.0;
    bool feasible = true;
    for (int step = 0; step < basis && feasible; ++step) {
      int chosen = -1;
      bool from_row = false;
      for (int i = 0; i < rows && chosen < 0; ++i) {
        int count = 0, last = -1;
        for (int c = 0; c < basis; ++c)
          if (!used[c] && pick[c] / cols == i) ++count, last = c;
        if (count == 1) chosen = last, from_row = true;
      }
      for (int j = 0; j < cols && chosen < 0; ++j) {
        int count = 0, last = -1;
        for (int c = 0; c < basis; ++c)
          if (!used[c] && pick[c] % cols == j) ++count, last = c;
        if (count == 1) chosen = last, from_row = false;
      }
      if (chosen < 0) {
        feasible = false;  // the cells contain a cycle
        break;
      }
      const int i = pick[chosen] / cols, j = pick[chosen] % cols;
      const double amount = from_row ? s[i] : d[j];
      if (amount < -1e-12) feasible = false;
      s[i] -= amount;
      d[j] -= amount;
      used[chosen] = 1;
      total += std::max(amount, 0.0) * cost(i, j);
    }
    if (feasible) {
      for (double v : s) feasible = feasible && std::abs(v) < 1e-9;
      for (double v : d) feasible = feasible && std::abs(v) < 1e-9;
    }
    if (feasible) best = std::min(best, total);

    int k = basis - 1;
    while (k >= 0 && pick[k] == cells - basis + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int m = k + 1; m < basis; ++m) pick[m] = pick[m - 1] + 1;
  }
  return best;
}

double grid_gilbert(const std::vector<Vec>& terminals, const std::vector<double>& weights, double alpha, double h) {
  const int n = static_cast<int>(terminals.size());
  double lo_x = terminals[0][0], hi_x = lo_x, lo_y = terminals[0][1], hi_y = lo_y;
  for (const auto& t : terminals) {
    lo_x = std::min(lo_x, t[0]);
    hi_x = std::max(hi_x, t[0]);
    lo_y = std::min(lo_y, t[1]);
    hi_y = std::max(hi_y, t[1]);
  }
  auto axis = [](double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-12 * (1 + std::abs(hi)); x += step) v.push_back(x);
    return v;
  };

  double best = std::numeric_limits<double>::infinity();
  for (const XTree& t : brute_force_trees(n)) {
    if (t.s > 2) throw std::invalid_argument("grid_gilbert: at most two Steiner vertices");
    const auto flows = split_flows(t, weights);
    double fixed = 0.0;
    // cost terms: (vertex a, vertex b, coefficient)
    std::vector<std::tuple<int, int, double>> terms;
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
      const double c = flows[e] == 0.0 ? 0.0 : std::pow(std::abs(flows[e]), alpha);
      if (c == 0.0) continue;
      const auto [a, b] = t.edges[e];
      if (a < n && b < n)
        fixed += c * (terminals[a] - terminals[b]).norm();
      else
        terms.emplace_back(a, b, c);
    }
    // Cost of Steiner vertex v at (x, y) towards terminals only.
    auto anchor = [&](int v, double x, double y) {
      double f = 0.0;
      for (const auto& [a, b, c] : terms) {
        const int other = a == v ? b : (b == v ? a : -1);
        if (other >= 0 && other < n) f += c * norm2(x - terminals[other][0], y - terminals[other][1]);
      }
      return f;
    };
    double bridge = 0.0;
    for (const auto& [a, b, c] : terms)
      if (a >= n && b >= n) bridge += c;

    if (t.s == 0) {
      best = std::min(best, fixed);
    } else if (t.s == 1) {
      double bx = 0, by = 0, bv = std::numeric_limits<double>::infinity();
      for (double x : axis(lo_x, hi_x, h))
        for (double y : axis(lo_y, hi_y, h)) {
          const double f = anchor(n, x, y);
          if (f < bv) bv = f, bx = x, by = y;
        }
      for (double x : axis(bx - h, bx + h, h / 10))
        for (double y : axis(by - h, by + h, h / 10)) bv = std::min(bv, anchor(n, x, y));
      best = std::min(best, fixed + bv);
    } else {
      auto search = [&](const std::vector<double>& xs1, const std::vector<double>& ys1, const std::vector<double>& xs2,
                        const std::vector<double>& ys2, double& b1x, double& b1y, double& b2x, double& b2y) {
        std::vector<double> f2, px2, py2;
        for (double x : xs2)
          for (double y : ys2) {
            f2.push_back(anchor(n + 1, x, y));
            px2.push_back(x);
            py2.push_back(y);
          }
        const double min2 = *std::min_element(f2.begin(), f2.end());
        double bv = std::numeric_limits<double>::infinity();
        for (double x : xs1)
          for (double y : ys1) {
            const double f1 = anchor(n, x, y);
            if (f1 + min2 >= bv) continue;
            for (std::size_t k = 0; k < f2.size(); ++k) {
              const double v = f1 + f2[k] + bridge * norm2(x - px2[k], y - py2[k]);
              if (v < bv) bv = v, b1x = x, b1y = y, b2x = px2[k], b2y = py2[k];
            }
          }
        return bv;
      };
      double b1x = 0, b1y = 0, b2x = 0, b2y = 0;
      const auto xs = axis(lo_x, hi_x, h), ys = axis(lo_y, hi_y, h);
      double bv = search(xs, ys, xs, ys, b1x, b1y, b2x, b2y);
      const double c1x = b1x, c1y = b1y, c2x = b2x, c2y = b2y;
      bv = std::min(bv, search(axis(c1x - h, c1x + h, h / 10), axis(c1y - h, c1y + h, h / 10),
                               axis(c2x - h, c2x + h, h / 10), axis(c2y - h, c2y + h, h / 10), b1x, b1y, b2x, b2y));
      best = std::min(best, fixed + bv);
    }
  }
  return best;
}

Vec weiszfeld(const std::vector<Vec>& points, const std::vector<double>& weights, int iterations) {
  Vec x = Vec::Zero(points[0].size());
  double wsum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    x += weights[i] * points[i];
    wsum += weights[i];
  }
  x /= wsum;
  for (int it = 0; it < iterations; ++it) {
    Vec num = Vec::Zero(x.size());
    double den = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double dist = (x - points[i]).norm();
      if (dist < 1e-300) return x;
      num += weights[i] / dist * points[i];
      den += weights[i] / dist;
    }
    const Vec next = num / den;
    if ((next - x).norm() < 1e-16) return next;
    x = next;
  }
  return x;
}

double three_point_grid(const Vec& x1, double a1, const Vec& x2, double a2, const Vec& y, double alpha,
                        double step) {
  const double c1 = std::pow(a1, alpha), c2 = std::pow(a2, alpha), c3 = std::pow(a1 + a2, alpha);
  const double lo_x = std::min({x1[0], x2[0], y[0]}), hi_x = std::max({x1[0], x2[0], y[0]});
  const double lo_y = std::min({x1[1], x2[1], y[1]}), hi_y = std::max({x1[1], x2[1], y[1]});
  double best = std::numeric_limits<double>::infinity();
  for (double px = lo_x; px <= hi_x + 1e-12; px += step)
    for (double py = lo_y; py <= hi_y + 1e-12; py += step)
      best = std::min(best, c1 * norm2(px - x1[0], py - x1[1]) + c2 * norm2(px - x2[0], py - x2[1]) +
                                c3 * norm2(px - y[0], py - y[1]));
  return best;
}

}  // namespace oracle
