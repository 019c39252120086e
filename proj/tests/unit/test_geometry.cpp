#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "ramulus/errors.hpp"
#include "ramulus/geometry.hpp"

using namespace ramulus;
using testing::pt;
constexpr double pi = std::numbers::pi;

TEST_CASE("angle_between basic cases") {
  CHECK(angle_between(pt(1, 0), pt(0, 1)) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(angle_between(pt(1, 0), pt(1, 0)) == 0.0);
  CHECK(std::abs(angle_between(pt(1, 0), pt(1, 1)) - std::acos(1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(angle_between(pt(1, 0), pt(-1, 0)) - pi) < 1e-15);
  CHECK_THROWS_AS(angle_between(pt(0, 0), pt(1, 0)), DomainError);
}

TEST_CASE("branch_angles closed forms") {
  const auto half = branch_angles(1, 1, 0.5);
  CHECK(std::abs(half.theta1 - pi / 4) < 1e-9);
  CHECK(std::abs(half.theta2 - pi / 4) < 1e-9);
  CHECK(std::abs(half.theta12 - pi / 2) < 1e-9);
  // The symmetric half angle is arccos(2^{2 alpha - 1} - 1) / 2.
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto s = branch_angles(2.5, 2.5, a);
    CHECK(std::abs(s.theta1 - std::acos(std::pow(2.0, 2 * a - 1) - 1) / 2) < 1e-9);
  }
  const auto steiner = branch_angles(3, 3, 0.0);
  CHECK(std::abs(steiner.theta1 - pi / 3) < 1e-9);
  CHECK(std::abs(steiner.theta12 - 2 * pi / 3) < 1e-9);
  const auto flat = branch_angles(1, 1, 0.999999);
  CHECK(flat.theta1 < 2e-3);
  CHECK_THROWS_AS(branch_angles(0, 1, 0.5), DomainError);
  CHECK_THROWS_AS(branch_angles(1, 1, 1.0), DomainError);
}

TEST_CASE("branch_angles symmetry, scale invariance and additivity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 5.0), ua(0.0, 0.99);
  for (int i = 0; i < 500; ++i) {
    const double a1 = u(rng), a2 = u(rng), alpha = ua(rng), lam = u(rng);
    const auto x = branch_angles(a1, a2, alpha);
    const auto y = branch_angles(a2, a1, alpha);
    CHECK(x.theta1 == y.theta2);
    CHECK(x.theta2 == y.theta1);
    const auto z = branch_angles(lam * a1, lam * a2, alpha);
    CHECK(std::abs(z.theta1 - x.theta1) < 1e-9);
    CHECK(std::abs(z.theta2 - x.theta2) < 1e-9);
    if (x.feasible) CHECK(std::abs(x.theta12 - x.theta1 - x.theta2) < 1e-9);
  }
}

TEST_CASE("cone balance residuals") {
  const auto two = cone_balance_residual(std::vector<ConeRay>{{pt(1, 0), 2.0}, {pt(-1, 0), -2.0}}, 0.5);
  CHECK(two.mass == 0.0);
  CHECK(two.direction.norm() < 1e-15);

  const auto single = cone_balance_residual(std::vector<ConeRay>{{pt(0, 1), 1.0}}, 0.5);
  CHECK(single.mass == 1.0);
  CHECK((single.direction - pt(0, 1)).norm() < 1e-15);

  // Y built from the computed angles: two unit inflows, one outflow of 2.
  const auto ang = branch_angles(1, 1, 0.5);
  const Point trunk = pt(1, 0);
  const Point back = -trunk;
  const Point r1 = pt(back[0] * std::cos(ang.theta1) - back[1] * std::sin(ang.theta1),
                      back[0] * std::sin(ang.theta1) + back[1] * std::cos(ang.theta1));
  const Point r2 = pt(back[0] * std::cos(-ang.theta2) - back[1] * std::sin(-ang.theta2),
                      back[0] * std::sin(-ang.theta2) + back[1] * std::cos(-ang.theta2));
  const auto y = cone_balance_residual(std::vector<ConeRay>{{r1, -1.0}, {r2, -1.0}, {trunk, 2.0}}, 0.5);
  CHECK(std::abs(y.mass) < 1e-9);
  CHECK(y.direction.norm() < 1e-9);
}

TEST_CASE("cone balance is additive over rays") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    std::vector<ConeRay> a, b, ab;
    for (int i = 0; i < 4; ++i) {
      const Point d = pt(g(rng), g(rng)).normalized();
      const double m = g(rng) + (g(rng) > 0 ? 0.5 : -0.5);
      (i % 2 ? a : b).emplace_back(d, m);
      ab.emplace_back(d, m);
    }
    const auto ra = cone_balance_residual(a, 0.6), rb = cone_balance_residual(b, 0.6),
               rab = cone_balance_residual(ab, 0.6);
    CHECK(std::abs(rab.mass - ra.mass - rb.mass) < 1e-12);
    CHECK((rab.direction - ra.direction - rb.direction).norm() < 1e-12);
  }
}

TEST_CASE("cone rays validate their fields") {
  CHECK_THROWS_AS(ConeRay(pt(1, 1), 1.0), DomainError);
  CHECK_THROWS_AS(ConeRay(pt(1, 0), 0.0), DomainError);
  CHECK_THROWS_AS(require_finite(pt(NAN, 0)), DomainError);
}

TEST_CASE("segment helpers") {
  CHECK(point_segment_distance(pt(0.5, 1), pt(0, 0), pt(1, 0)) == doctest::Approx(1.0));
  CHECK(point_segment_distance(pt(2, 0), pt(0, 0), pt(1, 0)) == doctest::Approx(1.0));
  CHECK(segment_segment_distance(pt(0, 0), pt(1, 1), pt(0, 1), pt(1, 0)) == doctest::Approx(0.0));
  const auto c = clip_segment_to_ball(pt(-2, 0), pt(2, 0), pt(0, 0), 1.0);
  CHECK(c.hit);
  CHECK(c.t0 == doctest::Approx(0.25));
  CHECK(c.t1 == doctest::Approx(0.75));
  CHECK_FALSE(clip_segment_to_ball(pt(-2, 2), pt(2, 2), pt(0, 0), 1.0).hit);
  CHECK(segment_ball_length(pt(-2, 0), pt(2, 0), pt(0, 0), 1.0) == doctest::Approx(2.0));
  const std::vector<Point> pts{pt(0, 0), pt(3, 4), pt(1, 1)};
  CHECK(diameter(pts) == doctest::Approx(5.0));
}
