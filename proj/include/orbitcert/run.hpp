#ifndef ORBITCERT_RUN_HPP
#define ORBITCERT_RUN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "orbitcert/model.hpp"

namespace orbitcert {

/// Batch-driver configuration; accepted from flags and from a config file
/// (flags win).  phi is "all" or a comma list of 1-based simple-root
/// indices; v_file optionally points to a JSON array of a-basis coordinate
/// rows (exact "p/q" strings) spanning V.
struct RunConfig {
  std::string model_name;
  int n = 0;
  std::string mode = "all";  // ideal | congruence | geometry | all
  std::string phi = "all";
  std::string v_file;
  double tol_orbit = 1e-6;
  int budget = 64;
  std::uint64_t seed = 12345;
  int pairs = 3;
  std::string out_dir = "reports";
  Tolerances tol;
};

/// Runs every (mode, Phi or V) task, writes one report file per task under
/// out_dir, prints a summary table, and returns 0 iff every verdict passed.
int run(const RunConfig& config);

}  // namespace orbitcert

#endif
