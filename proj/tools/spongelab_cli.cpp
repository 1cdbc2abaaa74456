// Command-line driver for the sponge symmetrization laboratory: verification
// suites and experiments with machine-readable reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spongelab/experiments.hpp"

using namespace spongelab;

namespace {

void add_common(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--trials", cfg.trials, "Monte Carlo trials");
  cmd->add_option("--seed", cfg.seed, "root seed (all randomness derives from it)");
  cmd->add_option("--out", cfg.out, "report file path (default: stdout)");
  cmd->add_option("--format", cfg.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void add_rc(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--r", cfg.r, "rate bits");
  cmd->add_option("--c", cfg.c, "capacity bits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spongelab: one-round sponge symmetrization and pre-computation games"};
  app.require_subcommand(0, 1);

  ExperimentConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path,
                 "declarative experiment config (JSON); a subcommand overrides its id");

  auto* verify = app.add_subcommand("verify", "exhaustive identity suite at (r, c)");
  add_rc(verify, cfg);
  add_common(verify, cfg);

  auto* census = app.add_subcommand("coset-census", "enumerate double cosets (2^n <= 8)");
  add_rc(census, cfg);
  add_common(census, cfg);

  auto* indiff = app.add_subcommand("indiff", "real vs simulated world distinguishing");
  add_rc(indiff, cfg);
  indiff->add_option("--distinguisher", cfg.distinguisher,
                     "constant-zero | inverse-consistency | likelihood-reader");
  add_common(indiff, cfg);

  auto* rmsr = app.add_subcommand("remove-sr", "shared-randomness removal, exact mode");
  add_rc(rmsr, cfg);
  rmsr->add_option("--sr-bits", cfg.sr_bits, "enumerable shared-randomness space bits");
  add_common(rmsr, cfg);

  auto* tradeoff = app.add_subcommand("tradeoff", "Hellman space-time trade-off sweep");
  add_rc(tradeoff, cfg);
  std::vector<std::string> grid_cells;
  tradeoff->add_option("--cell", grid_cells, "grid cell m,t,k (repeatable)");
  tradeoff->add_option("--capacity", cfg.capacities, "sponge capacities (repeatable)");
  tradeoff->add_option("--instances", cfg.instances, "target instances per cell");
  add_common(tradeoff, cfg);

  auto* separation = app.add_subcommand("separation", "trapdoor inversion separation");
  separation->add_option("--n", cfg.n, "output bits (inputs are 2n bits)");
  separation->add_option("--T", cfg.query_budget, "distinguisher query budget");
  add_common(separation, cfg);

  auto* truncation = app.add_subcommand("truncation-curve",
                                        "random function vs truncated permutation");
  truncation->add_option("--n", cfg.n, "domain bits");
  truncation->add_option("--m", cfg.m, "discarded output bits");
  truncation->add_option("--q", cfg.q_grid, "query counts (repeatable)");
  add_common(truncation, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw config_error("cannot read config file: " + config_path);
      ordered_json j = ordered_json::parse(in);
      cfg = ExperimentConfig::from_json(j);
    }
    for (CLI::App* sub : app.get_subcommands()) cfg.experiment = sub->get_name();
    if (!grid_cells.empty()) {
      cfg.grid.clear();
      for (const auto& cell : grid_cells) {
        HellmanParams hp;
        if (std::sscanf(cell.c_str(), "%u,%u,%u", &hp.m, &hp.t, &hp.k) != 3)
          throw parameter_error("bad --cell, expected m,t,k: " + cell);
        cfg.grid.push_back(hp);
      }
    }
    if (cfg.experiment.empty()) {
      std::cerr << app.help();
      return 1;
    }
    return run_experiment(cfg, std::cout);
  } catch (const parameter_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const guardrail_error& e) {
    std::cerr << "guardrail: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
