#include "ramulus/io.hpp"

#include <cmath>

#include "ramulus/errors.hpp"

namespace ramulus {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double real(const Json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": not finite");
  return v;
}

Point point(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw DomainError(std::string(what) + ": expected a non-empty coordinate array");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = real(j[i], what);
  return p;
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw DomainError(std::string(what) + ": expected an integer");
  return j.get<int>();
}

// Non-finite reals become null rather than invalid JSON.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

AtomicMeasure measure_from_json(const Json& j) {
  const Json& arr = field(j, "atoms");
  if (!arr.is_array()) throw DomainError("\"atoms\" must be an array");
  std::vector<Atom> atoms;
  for (const auto& a : arr) atoms.push_back({point(field(a, "x"), "atom position"), real(field(a, "w"), "atom weight")});
  int d = -1;
  for (const auto& a : atoms) {
    if (d >= 0 && a.position.size() != d) throw DomainError("atoms of different dimensions");
    d = static_cast<int>(a.position.size());
  }
  return AtomicMeasure(std::move(atoms));
}

Boundary boundary_from_json(const Json& j) { return Boundary(measure_from_json(j)); }

PolyChain chain_from_json(const Json& j) {
  const Json& vs = field(j, "vertices");
  const Json& es = field(j, "edges");
  if (!vs.is_array() || !es.is_array()) throw DomainError("\"vertices\" and \"edges\" must be arrays");
  std::vector<Point> vertices;
  for (const auto& v : vs) vertices.push_back(point(v, "vertex"));
  for (const auto& v : vertices)
    if (v.size() != vertices.front().size()) throw DomainError("vertices of different dimensions");
  std::vector<Edge> edges;
  for (const auto& e : es)
    edges.push_back({integer(field(e, "tail"), "tail"), integer(field(e, "head"), "head"), real(field(e, "w"), "w")});
  return PolyChain(std::move(vertices), std::move(edges));
}

FourPointInstance four_point_from_json(const Json& j, double alpha) {
  FourPointInstance inst;
  inst.A = point(field(j, "A"), "A");
  inst.B = point(field(j, "B"), "B");
  inst.C = point(field(j, "C"), "C");
  inst.D = point(field(j, "D"), "D");
  inst.theta = real(field(j, "theta"), "theta");
  inst.k = integer(field(j, "k"), "k");
  inst.alpha = j.contains("alpha") ? real(j.at("alpha"), "alpha") : alpha;
  return inst;
}

Json to_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p[i]);
  return out;
}

Json to_json(const AtomicMeasure& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"x", to_json(a.position)}, {"w", a.weight}});
  return {{"atoms", atoms}};
}

Json to_json(const PolyChain& c) {
  Json vs = Json::array();
  for (const auto& v : c.vertices()) vs.push_back(to_json(v));
  Json es = Json::array();
  for (const auto& e : c.edges()) es.push_back({{"tail", e.tail}, {"head", e.head}, {"w", e.multiplicity}});
  return {{"vertices", vs}, {"edges", es}};
}

Json to_json(const Certificates& c) {
  return {{"tree", c.tree},
          {"kirchhoff", c.kirchhoff},
          {"kirchhoff_residual", c.kirchhoff_residual},
          {"branch_points", c.branch_points},
          {"branch_count", c.branch_count},
          {"angles", c.angles},
          {"max_angle_error", c.max_angle_error},
          {"cone_balance", c.cone_balance},
          {"max_cone_residual", c.max_cone_residual},
          {"monotonicity", c.monotonicity},
          {"decomposition", c.decomposition},
          {"placement_converged", c.placement_converged},
          {"all", c.all()}};
}

Json to_json(const SolveResult& r) {
  Json ranking = Json::array();
  for (const auto& e : r.ranking) ranking.push_back({{"code", e.code}, {"value", e.value}});
  return {{"best", to_json(r.best)},
          {"value", r.value},
          {"gap", number(r.gap)},
          {"ranking", ranking},
          {"certificates", to_json(r.certificates)},
          {"topologies_enumerated", r.topologies_enumerated},
          {"topologies_placed", r.topologies_placed}};
}

Json to_json(const ProbeResult& r) {
  Json nets = Json::array();
  for (std::size_t i = 0; i < r.networks.size(); ++i)
    nets.push_back({{"network", to_json(r.networks[i])}, {"value", r.values[i]}});
  return {{"status", r.unique ? "unique" : "ambiguous"}, {"networks", nets}, {"gap", number(r.result.gap)}};
}

Json to_json(const FourPointResult& r) {
  Json ranking = Json::array();
  for (const auto& c : r.ranking) ranking.push_back({{"id", c.id}, {"value", c.value}});
  return {{"label", to_string(r.label)},
          {"winner", r.winner},
          {"ranking", ranking},
          {"w_value", r.w_value},
          {"z_value", r.z_value}};
}

Json to_json(const DyadicReport& r) {
  Json gens = Json::array();
  for (const auto& g : r.per_generation)
    gens.push_back({{"n", g.n}, {"mass", g.mass}, {"alpha_mass", g.alpha_mass}, {"bound", g.bound}});
  return {{"chain", to_json(r.chain)},
          {"per_generation", gens},
          {"total_alpha_mass", r.total_alpha_mass},
          {"series_converging", r.series_converging},
          {"series_bound", number(r.series_bound)},
          {"normalization", r.normalization},
          {"jitter", to_json(r.jitter)}};
}

Json to_json(const PerturbationReport& r) {
  Json out = {{"T_n", to_json(r.T_n)},
              {"b", to_json(r.b.measure())},
              {"b_n", to_json(r.b_n.measure())},
              {"mass_b", r.mass_b},
              {"mass_b_n", r.mass_b_n},
              {"mass_bound", r.mass_bound},
              {"mass_bound_ok", r.mass_bound_ok},
              {"flat_distance", r.flat_distance},
              {"flat_bound", r.flat_bound},
              {"flat_bound_ok", r.flat_bound_ok}};
  if (r.alpha_mass_decreased) out["alpha_mass_decreased"] = *r.alpha_mass_decreased;
  Json labels = Json::array();
  for (auto l : r.local_labels) labels.push_back(to_string(l));
  out["local_labels"] = labels;
  return out;
}

Json to_json(const StabilityReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members)
    members.push_back({{"flat_distance", m.flat_distance},
                       {"value", m.value},
                       {"deviation", m.deviation},
                       {"network", to_json(m.network)}});
  return {{"base_value", r.base_value},
          {"members", members},
          {"monotone", r.monotone},
          {"final_deviation", r.final_deviation},
          {"tolerance", r.tolerance}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ramulus
