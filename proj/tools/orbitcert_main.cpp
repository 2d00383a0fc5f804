#include <CLI11.hpp>

#include <iostream>

#include "orbitcert/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "orbitcert: builds the distinguished solvable subalgebras of concrete "
      "symmetric-space models, certifies their ideal relations in exact "
      "arithmetic, and verifies orbit congruence and orbit geometry numerically"};

  orbitcert::RunConfig cfg;
  app.set_config("--config", "", "configuration file (flags override file values)");
  app.add_option("--model", cfg.model_name, "model name: sl | so1n | hopf")->required();
  app.add_option("--n", cfg.n, "model size parameter")->required();
  app.add_option("--mode", cfg.mode, "ideal | congruence | geometry | all");
  app.add_option("--phi", cfg.phi, "comma list of 1-based simple-root indices, or 'all'");
  app.add_option("--v", cfg.v_file, "JSON file with a-basis coordinate rows spanning V");
  app.add_option("--tol-orbit", cfg.tol_orbit, "distance-to-orbit tolerance");
  app.add_option("--budget", cfg.budget, "orbit samples per congruence check");
  app.add_option("--seed", cfg.seed, "seed for random point pairs");
  app.add_option("--pairs", cfg.pairs, "point pairs per congruence task");
  app.add_option("--out", cfg.out_dir, "report output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    return orbitcert::run(cfg);
  } catch (const orbitcert::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
