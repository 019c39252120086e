#include <iostream>

#include <CLI11.hpp>

#include "cli/run.hpp"

int main(int argc, char** argv) {
  using ramulus::cli::RunConfig;
  RunConfig cfg;
  std::string command;
  std::string svg;

  CLI::App app{"ramulus: branched transport networks on atomic measures"};
  app.add_option("command", command, "solve | flatnorm | dyadic | perturb | classify | stability | validate")
      ->required();
  app.add_option("input", cfg.input_path, "input JSON file, '-' for standard input")->required();
  app.add_option("-o,--output", cfg.output_path, "output file, '-' for standard output");
  app.add_option("--alpha", cfg.alpha, "cost exponent in [0, 1)");
  app.add_option("--depth", cfg.depth, "dyadic generations");
  app.add_option("--k", cfg.k, "perturbation divisor");
  app.add_option("--n", cfg.n, "perturbation ball radius is 1/n");
  app.add_option("--gap-tol", cfg.gap_tol, "relative gap under which minimizers count as tied");
  app.add_option("--atom-cap", cfg.atom_cap, "largest atom count the solver accepts");
  app.add_option("--seed", cfg.seed, "seed for sampled diagnostics");
  app.add_option("--svg", svg, "also write an SVG drawing here");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--placement-tol", cfg.placement_tol, "duality-gap tolerance of each placement");
  app.add_option("--stability-tol", cfg.stability_tol, "monotone-envelope tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const auto cmd = ramulus::cli::parse_command(command);
  if (!cmd) {
    std::cerr << R"({"error": "input_error", "message": "unknown command )" << command << "\"}\n";
    return 2;
  }
  cfg.command = *cmd;
  if (!svg.empty()) cfg.svg_path = svg;
  return ramulus::cli::run(cfg, std::cerr);
}
