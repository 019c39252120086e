#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ramulus/errors.hpp"
#include "ramulus/optimizer.hpp"

using namespace ramulus;
using testing::pt;
constexpr double pi = std::numbers::pi;

namespace {

PlacementProblem star(std::vector<Point> terminals, std::vector<double> weights, double alpha) {
  const int n = static_cast<int>(terminals.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, n);
  Topology t(n, 1, edges);
  auto flows = edge_flows(t, weights);
  return {std::move(t), std::move(flows), std::move(terminals), alpha};
}

PlacementProblem random_full(std::mt19937_64& rng, int n, double alpha) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto all = full_topologies(n);
  const Topology& t = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  std::vector<Point> terminals;
  std::vector<double> w;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    terminals.push_back(pt(u(rng), u(rng)));
    w.push_back(i + 1 < n ? (i % 2 ? 1 : -1) * (0.2 + u(rng)) : 0.0);
    sum += w.back();
  }
  w.back() = -sum;
  return {t, edge_flows(t, w), terminals, alpha};
}

std::vector<Point> random_steiner(std::mt19937_64& rng, int s) {
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  std::vector<Point> x;
  for (int i = 0; i < s; ++i) x.push_back(pt(u(rng), u(rng)));
  return x;
}

}  // namespace

TEST_CASE("Fermat point at alpha zero") {
  const std::vector<Point> tri{pt(0, 0), pt(4, 0), pt(1, 3)};
  const auto p = star(tri, {-1.0, -1.0, 2.0}, 0.0);
  const auto r = minimize_placement(p);
  CHECK(r.converged);
  const auto ref = oracle::weiszfeld({tri[0], tri[1], tri[2]}, {1.0, 1.0, 1.0});
  const double fref = placement_objective(p, std::vector<Point>{ref});
  CHECK(std::abs(r.value - fref) < 1e-9 * fref);
  CHECK((r.steiner_positions[0] - ref).norm() < 1e-6);
  const Point s = r.steiner_positions[0];
  CHECK(std::abs(angle_between(tri[0] - s, tri[1] - s) - 2 * pi / 3) < 1e-6);
  CHECK(std::abs(angle_between(tri[1] - s, tri[2] - s) - 2 * pi / 3) < 1e-6);
}

TEST_CASE("weighted geometric median for general alpha") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const std::vector<Point> tri{pt(u(rng), u(rng)), pt(u(rng), u(rng)), pt(u(rng), u(rng))};
    const double a1 = 0.2 + u(rng), a2 = 0.2 + u(rng), alpha = 0.8 * u(rng);
    const auto p = star(tri, {-a1, -a2, a1 + a2}, alpha);
    const auto r = minimize_placement(p);
    const auto ref = oracle::weiszfeld({tri[0], tri[1], tri[2]},
                                       {std::pow(a1, alpha), std::pow(a2, alpha), std::pow(a1 + a2, alpha)});
    const double fr = placement_objective(p, std::vector<Point>{ref});
    CHECK(r.value <= fr + 1e-9 * (1 + fr));
  }
}

TEST_CASE("collinear terminals collapse onto the segment") {
  for (double alpha : {0.0, 0.3, 0.7}) {
    const std::vector<Point> line{pt(0, 0), pt(1, 0), pt(3, 0)};
    const auto p = star(line, {-1.0, -2.0, 3.0}, alpha);
    const auto r = minimize_placement(p);
    CHECK(r.converged);
    const double expected = 1.0 + 2.0 * std::pow(3.0, alpha);
    CHECK(std::abs(r.value - expected) < 1e-8 * expected);
    CHECK(std::abs(r.steiner_positions[0][1]) < 1e-6);
  }
}

TEST_CASE("symmetric Y at alpha one half opens at pi/4") {
  // Sources far enough apart that the branch point is interior.
  const std::vector<Point> tri{pt(-1, 0), pt(1, 0), pt(0, 3)};
  const auto p = star(tri, {-1.0, -1.0, 2.0}, 0.5);
  const auto r = minimize_placement(p);
  CHECK(r.converged);
  const Point s = r.steiner_positions[0];
  const Point back = s - tri[2];
  CHECK(std::abs(angle_between(tri[0] - s, back) - pi / 4) < 1e-5);
  CHECK(std::abs(angle_between(tri[1] - s, back) - pi / 4) < 1e-5);
}

TEST_CASE("result beats random perturbations and lies in the hull box") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1e-3);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_full(rng, 5, 0.5);
    const auto r = minimize_placement(p);
    double lo_x = 1e9, hi_x = -1e9, lo_y = 1e9, hi_y = -1e9;
    for (const auto& q : p.terminals) {
      lo_x = std::min(lo_x, q[0]);
      hi_x = std::max(hi_x, q[0]);
      lo_y = std::min(lo_y, q[1]);
      hi_y = std::max(hi_y, q[1]);
    }
    for (const auto& s : r.steiner_positions) {
      CHECK(s[0] >= lo_x - 1e-9);
      CHECK(s[0] <= hi_x + 1e-9);
      CHECK(s[1] >= lo_y - 1e-9);
      CHECK(s[1] <= hi_y + 1e-9);
    }
    for (int k = 0; k < 100; ++k) {
      auto x = r.steiner_positions;
      for (auto& s : x) s += pt(g(rng), g(rng));
      CHECK(placement_objective(p, x) >= r.value - 1e-9 * (1 + r.value));
    }
    CHECK(dual_bound(p, r.steiner_positions, 0.0) <= r.value + 1e-12);
    if (r.converged) CHECK(r.gap <= 1e-9 * (1 + r.value));
  }
}

TEST_CASE("objective is convex") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_full(rng, 5, 0.6);
    const auto P = random_steiner(rng, 3), Q = random_steiner(rng, 3);
    const double lam = u(rng);
    std::vector<Point> M;
    for (int i = 0; i < 3; ++i) M.push_back(lam * P[i] + (1 - lam) * Q[i]);
    CHECK(placement_objective(p, M) <=
          lam * placement_objective(p, P) + (1 - lam) * placement_objective(p, Q) + 1e-12);
  }
}

TEST_CASE("smoothed gradient matches central differences") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_full(rng, 5, 0.5);
    const auto x = random_steiner(rng, 3);
    const double eps = 1e-3;
    const Eigen::MatrixXd g = smoothed_gradient(p, x, eps);
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) {
        auto xp = x, xm = x;
        xp[i][j] += h;
        xm[i][j] -= h;
        const double fd = (smoothed_objective(p, xp, eps) - smoothed_objective(p, xm, eps)) / (2 * h);
        CHECK(std::abs(fd - g(i, j)) <= 1e-6 * std::max(1.0, std::abs(g(i, j))));
      }
  }
}

TEST_CASE("scale equivariance") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    auto p = random_full(rng, 4, 0.4);
    const auto r = minimize_placement(p);
    const double lam = 3.5;
    auto q = p;
    for (auto& x : q.terminals) x *= lam;
    const auto rq = minimize_placement(q);
    CHECK(std::abs(rq.value - lam * r.value) < 1e-8 * lam * r.value);
    for (std::size_t i = 0; i < r.steiner_positions.size(); ++i)
      CHECK((rq.steiner_positions[i] - lam * r.steiner_positions[i]).norm() < 1e-4 * lam);
  }
}

TEST_CASE("edge cost and problem checks") {
  CHECK(edge_cost(0.0, 0.0) == 0.0);
  CHECK(edge_cost(-4.0, 0.5) == 2.0);
  auto p = star({pt(0, 0), pt(1, 0), pt(0, 1)}, {-1.0, -1.0, 2.0}, 0.5);
  p.alpha = 1.5;
  CHECK_THROWS_AS(check_problem(p), DomainError);
}
