#include "ramulus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ramulus/errors.hpp"

namespace ramulus {

namespace {

// acos with the slack policy: arguments within kCosineSlack of [-1, 1] are
// clamped, anything further out marks the configuration infeasible.
bool checked_acos(double c, double& angle) {
  if (!std::isfinite(c) || c > 1.0 + kCosineSlack || c < -1.0 - kCosineSlack) {
    angle = std::numeric_limits<double>::quiet_NaN();
    return false;
  }
  angle = std::acos(std::clamp(c, -1.0, 1.0));
  return true;
}

}  // namespace

void require_finite(const Point& p) {
  if (p.size() < 1) throw DomainError("point has dimension 0");
  if (!p.allFinite()) throw DomainError("point has a non-finite coordinate");
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

double angle_between(const Point& u, const Point& v) {
  if (u.size() != v.size()) throw DomainError("angle_between: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) throw DomainError("angle_between: zero vector");
  const double c = u.dot(v) / (nu * nv);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

BranchAngles branch_angles(double a1, double a2, double alpha) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("branch_angles: masses must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("branch_angles: alpha must lie in [0,1)");

  const double k1 = a1 / (a1 + a2);
  const double k2 = a2 / (a1 + a2);
  const double p1 = std::pow(k1, alpha);
  const double p2 = std::pow(k2, alpha);

  const double c1 = (p1 * p1 + 1.0 - p2 * p2) / (2.0 * p1);
  const double c2 = (p2 * p2 + 1.0 - p1 * p1) / (2.0 * p2);
  const double c12 = (1.0 - p1 * p1 - p2 * p2) / (2.0 * p1 * p2);

  BranchAngles out;
  const bool ok1 = checked_acos(c1, out.theta1);
  const bool ok2 = checked_acos(c2, out.theta2);
  const bool ok12 = checked_acos(c12, out.theta12);
  out.feasible = ok1 && ok2 && ok12;
  return out;
}

ConeRay::ConeRay(Point direction, double multiplicity)
    : direction_(std::move(direction)), multiplicity_(multiplicity) {
  require_finite(direction_);
  if (std::abs(direction_.norm() - 1.0) > 1e-12) throw DomainError("ConeRay: direction is not a unit vector");
  if (multiplicity_ == 0.0 || !std::isfinite(multiplicity_)) throw DomainError("ConeRay: multiplicity must be nonzero");
}

ConeResidual cone_balance_residual(std::span<const ConeRay> rays, double alpha) {
  if (rays.empty()) throw DomainError("cone_balance_residual: no rays");
  const auto d = rays.front().direction().size();
  ConeResidual r{0.0, Point::Zero(d)};
  for (const auto& ray : rays) {
    if (ray.direction().size() != d) throw DomainError("cone_balance_residual: dimension mismatch");
    r.mass += ray.multiplicity();
    // First-order condition of the cone: the weight of a ray is |m|^alpha
    // whatever its orientation.
    r.direction += std::pow(std::abs(ray.multiplicity()), alpha) * ray.direction();
  }
  return r;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double segment_segment_distance(const Point& a, const Point& b, const Point& c,
                                const Point& d) {
  // Closest points of two segments (clamped quadratic minimisation).
  const Point u = b - a;
  const Point v = d - c;
  const Point w = a - c;
  const double uu = u.squaredNorm();
  const double vv = v.squaredNorm();
  const double uv = u.dot(v);
  const double uw = u.dot(w);
  const double vw = v.dot(w);
  if (uu == 0.0) return point_segment_distance(a, c, d);
  if (vv == 0.0) return point_segment_distance(c, a, b);

  const double den = uu * vv - uv * uv;
  double s = 0.0;
  if (den > 1e-14 * uu * vv) s = std::clamp((uv * vw - vv * uw) / den, 0.0, 1.0);
  double t = (uv * s + vw) / vv;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-uw / uu, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((uv - uw) / uu, 0.0, 1.0);
  }
  double best = ((a + s * u) - (c + t * v)).norm();
  // Endpoint checks guard the parallel branch.
  best = std::min({best, point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
  return best;
}

SegmentClip clip_segment_to_ball(const Point& a, const Point& b, const Point& center,
                                 double r) {
  // |a + t u - center|^2 = r^2  ->  uu t^2 + 2 (u.w) t + (w.w - r^2) = 0
  const Point u = b - a;
  const Point w = a - center;
  const double uu = u.squaredNorm();
  SegmentClip out;
  if (uu == 0.0) {
    if (w.norm() <= r) out = {true, 0.0, 1.0};
    return out;
  }
  // Foot of the perpendicular from the center onto the line. Working with
  // the squared distance to the foot avoids the cancellation in
  // b^2 - 4ac when r is much smaller than |a - center|.
  const double s = -u.dot(w) / uu;
  const double d2 = (w + s * u).squaredNorm();
  const double gap = r * r - d2;
  if (gap < 0.0) return out;
  const double h = std::sqrt(gap / uu);
  double t0 = s - h;
  double t1 = s + h;
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  if (t0 > t1) return out;
  out = {true, t0, t1};
  return out;
}

double segment_ball_length(const Point& a, const Point& b, const Point& center, double r) {
  const auto clip = clip_segment_to_ball(a, b, center, r);
  if (!clip.hit) return 0.0;
  return (clip.t1 - clip.t0) * (b - a).norm();
}

double diameter(std::span<const Point> points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, (points[i] - points[j]).norm());
  return best;
}

}  // namespace ramulus
