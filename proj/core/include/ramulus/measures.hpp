#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ramulus/geometry.hpp"

namespace ramulus {

struct Atom {
  Point position;
  double weight = 0.0;
};

bool operator==(const Atom& a, const Atom& b);

/// Finite signed atomic measure (a 0-current). Atoms are kept sorted by
/// lexicographic position; atoms at coordinatewise identical positions are
/// merged and zero weights dropped.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  /// Ambient dimension, 0 for the empty measure.
  int dim() const;
  double total_weight() const;

  /// Positions of the support, in atom order.
  std::vector<Point> support() const;

  AtomicMeasure operator+(const AtomicMeasure& other) const;
  AtomicMeasure operator-(const AtomicMeasure& other) const;
  AtomicMeasure scaled(double factor) const;

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// Lexicographic order on coordinates.
bool lex_less(const Point& a, const Point& b);

/// A signed atomic measure with zero total weight: the boundary of some
/// 1-current. Construction throws DomainError if unbalanced.
class Boundary {
 public:
  Boundary() = default;
  explicit Boundary(AtomicMeasure measure);

  const AtomicMeasure& measure() const { return measure_; }
  std::span<const Atom> atoms() const { return measure_.atoms(); }
  std::size_t size() const { return measure_.size(); }
  int dim() const { return measure_.dim(); }

  static bool is_balanced(const AtomicMeasure& m);

 private:
  AtomicMeasure measure_;
};

/// Total variation: sum of |w|.
double mass(const AtomicMeasure& m);

/// (positive part, negative part), both with nonnegative weights.
std::pair<AtomicMeasure, AtomicMeasure> jordan(const AtomicMeasure& m);

/// Flat norm of an atomic 0-current: the cheapest partial transport
/// between the Jordan parts where every untransported unit of mass costs 1.
/// Accepts unbalanced measures too.
double flat_norm_0(const AtomicMeasure& m);
inline double flat_norm_0(const Boundary& b) { return flat_norm_0(b.measure()); }

/// Optimal plan behind flat_norm_0: matched amounts between positive atom i
/// and negative atom j (indices into the Jordan parts).
struct FlatNormPlan {
  double value = 0.0;
  std::vector<std::vector<double>> matched;
};
FlatNormPlan flat_norm_plan(const AtomicMeasure& m);

}  // namespace ramulus
