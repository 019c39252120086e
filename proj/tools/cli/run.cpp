#include "run.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "ramulus/errors.hpp"
#include "ramulus/experiments.hpp"
#include "ramulus/io.hpp"
#include "ramulus/local_branch.hpp"
#include "ramulus/solver.hpp"
#include "ramulus/svg.hpp"

namespace ramulus::cli {

namespace {

class InputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "input_error"; }
};

std::string read_all(const std::string& path) {
  if (path.empty()) throw InputError("no input file given");
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("alpha must lie in [0, 1)");
}

std::string csv_number(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

void write_svg(const RunConfig& cfg, const SvgImage& img, std::ostream& err) {
  if (!cfg.svg_path) return;
  if (img.projected)
    err << R"({"warning": "svg shows the projection onto the first two coordinates"})" << "\n";
  write_all(*cfg.svg_path, img.text);
}

std::vector<Point> points_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("\"points\" must be an array of coordinate arrays");
  std::vector<Point> out;
  for (const auto& p : j) {
    // Reuse the atom reader for coordinate validation.
    const AtomicMeasure m = measure_from_json(Json{{"atoms", Json::array({Json{{"x", p}, {"w", 1.0}}})}});
    out.push_back(m.atoms().front().position);
  }
  return out;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.atom_cap = cfg.atom_cap;
  o.placement_tol = cfg.placement_tol;
  o.monotonicity_seed = static_cast<unsigned>(cfg.seed);
  return o;
}

std::string run_solve(const RunConfig& cfg, std::ostream& err) {
  check_alpha(cfg.alpha);
  const Boundary b = boundary_from_json(parse_json(read_all(cfg.input_path)));
  const SolveResult r = solve_gilbert(b, cfg.alpha, solver_options(cfg));
  Json out = to_json(r);
  out["alpha"] = cfg.alpha;
  int near = 0;
  for (const auto& e : r.ranking)
    if (e.value - r.value <= cfg.gap_tol * r.value) ++near;
  out["uniqueness"] = {{"status", near >= 2 ? "ambiguous" : "unique"}, {"near_minimizers", near}, {"gap_tol", cfg.gap_tol}};
  write_svg(cfg, chain_svg(r.best, {cfg.alpha}), err);
  return dump(out);
}

std::string run_flatnorm(const RunConfig& cfg) {
  const AtomicMeasure m = measure_from_json(parse_json(read_all(cfg.input_path)));
  return dump({{"flat_norm", flat_norm_0(m)}, {"mass", mass(m)}});
}

std::string run_dyadic(const RunConfig& cfg, std::ostream& err) {
  const AtomicMeasure m = measure_from_json(parse_json(read_all(cfg.input_path)));
  const DyadicReport r = dyadic_transport(m, cfg.alpha, cfg.depth);
  write_svg(cfg, chain_svg(r.chain, {cfg.alpha}), err);
  if (cfg.format == "json") return dump(to_json(r));
  std::string csv = "n,mass,alpha_mass,bound\n";
  for (const auto& g : r.per_generation)
    csv += std::to_string(g.n) + "," + csv_number(g.mass) + "," + csv_number(g.alpha_mass) + "," +
           csv_number(g.bound) + "\n";
  return csv;
}

std::string run_perturb(const RunConfig& cfg, std::ostream& err) {
  check_alpha(cfg.alpha);
  const Json in = parse_json(read_all(cfg.input_path));
  if (!in.is_object() || !in.contains("chain") || !in.contains("points"))
    throw DomainError("perturb input needs \"chain\" and \"points\"");
  const PolyChain T = chain_from_json(in.at("chain"));
  const auto points = points_from_json(in.at("points"));
  const PerturbationReport r = perturb_boundary(T, points, cfg.k, cfg.n, cfg.alpha);
  write_svg(cfg, chain_svg(r.T_n, {cfg.alpha}), err);
  return dump(to_json(r));
}

std::string run_classify(const RunConfig& cfg, std::ostream& err) {
  const FourPointInstance inst = four_point_from_json(parse_json(read_all(cfg.input_path)), cfg.alpha);
  const FourPointResult r = classify_four_point(inst);
  if (cfg.svg_path) {
    std::vector<std::pair<std::string, PolyChain>> panels;
    for (const auto& c : r.ranking) panels.emplace_back(c.id + "  " + csv_number(c.value).substr(0, 10), c.network);
    write_svg(cfg, contact_sheet(panels, {inst.alpha, 240.0}), err);
  }
  Json out = to_json(r);
  out["alpha"] = inst.alpha;
  out["k"] = inst.k;
  out["theta"] = inst.theta;
  return dump(out);
}

std::string run_stability(const RunConfig& cfg) {
  check_alpha(cfg.alpha);
  const Json in = parse_json(read_all(cfg.input_path));
  if (!in.is_object() || !in.contains("base")) throw DomainError("stability input needs \"base\"");
  const Boundary base = boundary_from_json(in.at("base"));
  const SolverOptions opts = solver_options(cfg);
  std::vector<Boundary> family;
  if (in.contains("family")) {
    for (const auto& m : in.at("family")) family.push_back(boundary_from_json(m));
  } else if (in.contains("points")) {
    // Perturbation family of the base optimum over the given scales.
    const auto points = points_from_json(in.at("points"));
    std::vector<int> ns{4, 8, 16, 32, 64};
    if (in.contains("n")) ns = in.at("n").get<std::vector<int>>();
    const PolyChain T = solve_gilbert(base, cfg.alpha, opts).best;
    for (int n : ns) family.push_back(perturb_boundary(T, points, cfg.k, n).b_n);
  } else {
    throw DomainError("stability input needs \"family\" or \"points\"");
  }
  const StabilityReport r = stability_experiment(base, family, cfg.alpha, opts, cfg.stability_tol);
  if (cfg.format == "csv") {
    std::string csv = "flat_distance,value,deviation\n";
    for (const auto& m : r.members)
      csv += csv_number(m.flat_distance) + "," + csv_number(m.value) + "," + csv_number(m.deviation) + "\n";
    return csv;
  }
  return dump(to_json(r));
}

std::string run_validate(const RunConfig& cfg) {
  const Json in = parse_json(read_all(cfg.input_path));
  const Json& net = in.is_object() && in.contains("best") ? in.at("best") : in;
  const PolyChain c = chain_from_json(net);
  const auto issues = validated_form_issues(c);
  Json out = {{"valid", issues.empty()},
              {"issues", issues},
              {"tree", is_tree(c)},
              {"has_cycle", has_cycle(c)},
              {"mass", mass(c)},
              {"boundary", to_json(boundary(c))}};
  if (cfg.alpha >= 0 && cfg.alpha <= 1) out["alpha_mass"] = alpha_mass(c, cfg.alpha);
  if (!issues.empty()) throw PreconditionError("network is not in validated form: " + issues.front());
  return dump(out);
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "flatnorm") return Command::FlatNorm;
  if (name == "dyadic") return Command::Dyadic;
  if (name == "perturb") return Command::Perturb;
  if (name == "classify") return Command::Classify;
  if (name == "stability") return Command::Stability;
  if (name == "validate") return Command::Validate;
  return std::nullopt;
}

int run(const RunConfig& cfg, std::ostream& err) {
  auto report = [&](const char* kind, const std::string& message) {
    err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
  };
  try {
    std::string out;
    switch (cfg.command) {
      case Command::Solve:
        out = run_solve(cfg, err);
        break;
      case Command::FlatNorm:
        out = run_flatnorm(cfg);
        break;
      case Command::Dyadic:
        out = run_dyadic(cfg, err);
        break;
      case Command::Perturb:
        out = run_perturb(cfg, err);
        break;
      case Command::Classify:
        out = run_classify(cfg, err);
        break;
      case Command::Stability:
        out = run_stability(cfg);
        break;
      case Command::Validate:
        out = run_validate(cfg);
        break;
    }
    write_all(cfg.output_path, out);
    return 0;
  } catch (const CapacityError& e) {
    report(e.kind(), e.what());
    return 3;
  } catch (const Error& e) {
    report(e.kind(), e.what());
    return 2;
  } catch (const Json::exception& e) {
    report("input_error", e.what());
    return 2;
  }
}

}  // namespace ramulus::cli
