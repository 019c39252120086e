#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace ramulus {

/// A location in R^d. All points of one problem instance share d.
using Point = Eigen::VectorXd;

/// Absolute tolerance for angle comparisons (radians).
inline constexpr double kAngleTolerance = 1e-9;

/// Slack allowed when a cosine argument leaves [-1, 1] through rounding.
inline constexpr double kCosineSlack = 1e-12;

/// Throws DomainError unless every coordinate is finite and d >= 1.
void require_finite(const Point& p);

double distance(const Point& a, const Point& b);

/// Angle in [0, pi] between two nonzero vectors.
double angle_between(const Point& u, const Point& v);

/// Opening angles of an optimal Y-branch joining masses a1 and a2 into a
/// trunk carrying a1 + a2. theta1 (theta2) is measured between the edge
/// towards the a1 (a2) endpoint and the backward extension of the trunk.
struct BranchAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta12 = 0.0;
  /// False when a cosine argument falls outside [-1, 1] beyond
  /// kCosineSlack: no locally optimal Y exists and a V is expected.
  bool feasible = true;
};

BranchAngles branch_angles(double a1, double a2, double alpha);

/// A ray of a tangent cone: unit direction away from the vertex, signed
/// multiplicity of the flow carried along it.
class ConeRay {
 public:
  ConeRay(Point direction, double multiplicity);

  const Point& direction() const { return direction_; }
  double multiplicity() const { return multiplicity_; }

 private:
  Point direction_;
  double multiplicity_;
};

struct ConeResidual {
  double mass = 0.0;
  Point direction;
};

/// Residuals of the two balancing conditions of a cone: sum of
/// multiplicities and sum of |m_i|^alpha * direction_i.
ConeResidual cone_balance_residual(std::span<const ConeRay> rays, double alpha);

// Segment helpers shared by chains, experiments and the solver.

double point_segment_distance(const Point& p, const Point& a, const Point& b);

double segment_segment_distance(const Point& a, const Point& b, const Point& c,
                                const Point& d);

/// Parameters t0 <= t1 in [0,1] such that a + t (b - a) lies in the closed
/// ball B_r(center) exactly for t in [t0, t1]. Empty when they miss.
struct SegmentClip {
  bool hit = false;
  double t0 = 0.0;
  double t1 = 0.0;
};
SegmentClip clip_segment_to_ball(const Point& a, const Point& b,
                                 const Point& center, double r);

/// Length of segment [a, b] inside the closed ball B_r(center).
double segment_ball_length(const Point& a, const Point& b, const Point& center,
                           double r);

/// Largest pairwise distance.
double diameter(std::span<const Point> points);

}  // namespace ramulus
