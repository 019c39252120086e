#include "ramulus/measures.hpp"

#include <algorithm>
#include <cmath>

#include "ramulus/errors.hpp"
#include "ramulus/min_cost_flow.hpp"

namespace ramulus {

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

bool operator==(const Atom& a, const Atom& b) {
  return a.weight == b.weight && a.position.size() == b.position.size() &&
         a.position == b.position;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) return;
  const auto d = atoms.front().position.size();
  for (const auto& a : atoms) {
    require_finite(a.position);
    if (a.position.size() != d) throw DomainError("AtomicMeasure: atoms of different dimension");
    if (!std::isfinite(a.weight)) throw DomainError("AtomicMeasure: non-finite weight");
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return lex_less(a.position, b.position); });

  // Merge coordinatewise-identical positions. A merged weight counts as zero
  // when it is rounding noise relative to the largest contribution.
  for (std::size_t i = 0; i < atoms.size();) {
    std::size_t j = i;
    double sum = 0.0;
    double scale = 0.0;
    while (j < atoms.size() && atoms[j].position == atoms[i].position) {
      sum += atoms[j].weight;
      scale = std::max(scale, std::abs(atoms[j].weight));
      ++j;
    }
    if (std::abs(sum) > 1e-14 * scale) atoms_.push_back({atoms[i].position, sum});
    i = j;
  }
}

int AtomicMeasure::dim() const {
  return atoms_.empty() ? 0 : static_cast<int>(atoms_.front().position.size());
}

double AtomicMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

std::vector<Point> AtomicMeasure::support() const {
  std::vector<Point> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.position);
  return out;
}

AtomicMeasure AtomicMeasure::operator+(const AtomicMeasure& other) const {
  std::vector<Atom> all(atoms_.begin(), atoms_.end());
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return AtomicMeasure(std::move(all));
}

AtomicMeasure AtomicMeasure::operator-(const AtomicMeasure& other) const {
  return *this + other.scaled(-1.0);
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (auto& a : out) a.weight *= factor;
  return AtomicMeasure(std::move(out));
}

bool Boundary::is_balanced(const AtomicMeasure& m) {
  return std::abs(m.total_weight()) <= 1e-12 * mass(m);
}

Boundary::Boundary(AtomicMeasure measure) : measure_(std::move(measure)) {
  if (!is_balanced(measure_))
    throw DomainError("boundary is unbalanced: total weight " + std::to_string(measure_.total_weight()));
}

double mass(const AtomicMeasure& m) {
  double s = 0.0;
  for (const auto& a : m.atoms()) s += std::abs(a.weight);
  return s;
}

std::pair<AtomicMeasure, AtomicMeasure> jordan(const AtomicMeasure& m) {
  std::vector<Atom> pos;
  std::vector<Atom> neg;
  for (const auto& a : m.atoms()) {
    if (a.weight > 0.0)
      pos.push_back(a);
    else
      neg.push_back({a.position, -a.weight});
  }
  return {AtomicMeasure(std::move(pos)), AtomicMeasure(std::move(neg))};
}

FlatNormPlan flat_norm_plan(const AtomicMeasure& m) {
  const auto [plus, minus] = jordan(m);
  const int np = static_cast<int>(plus.size());
  const int nm = static_cast<int>(minus.size());
  FlatNormPlan plan;
  plan.matched.assign(np, std::vector<double>(nm, 0.0));
  if (np == 0 && nm == 0) return plan;

  const double mp = mass(plus);
  const double mm = mass(minus);

  // Balanced transportation problem: supplies are the positive atoms plus a
  // dummy carrying mass(minus); demands are the negative atoms plus a dummy
  // carrying mass(plus). Routing through a dummy is discarding at cost 1.
  const int src = 0;
  const int sink = 1;
  const int first_p = 2;
  const int dummy_p = first_p + np;
  const int first_m = dummy_p + 1;
  const int dummy_m = first_m + nm;
  MinCostFlow net(dummy_m + 1);

  for (int i = 0; i < np; ++i) net.add_arc(src, first_p + i, plus.atoms()[i].weight, 0.0);
  net.add_arc(src, dummy_p, mm, 0.0);
  for (int j = 0; j < nm; ++j) net.add_arc(first_m + j, sink, minus.atoms()[j].weight, 0.0);
  net.add_arc(dummy_m, sink, mp, 0.0);

  const double inf = mp + mm;
  std::vector<std::vector<int>> pair_arc(np, std::vector<int>(nm, -1));
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nm; ++j)
      pair_arc[i][j] = net.add_arc(first_p + i, first_m + j, inf,
                                   distance(plus.atoms()[i].position, minus.atoms()[j].position));
    net.add_arc(first_p + i, dummy_m, inf, 1.0);
  }
  for (int j = 0; j < nm; ++j) net.add_arc(dummy_p, first_m + j, inf, 1.0);
  net.add_arc(dummy_p, dummy_m, inf, 0.0);

  const auto res = net.solve(src, sink, mp + mm);
  plan.value = res.cost;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nm; ++j) plan.matched[i][j] = net.flow(pair_arc[i][j]);
  return plan;
}

double flat_norm_0(const AtomicMeasure& m) { return flat_norm_plan(m).value; }

}  // namespace ramulus
