#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gcdhmc/dynamics.hpp"
#include "gcdhmc/mh.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything one experiment needs, parsed from a flat `key = value` file
/// (one entry per line, `#` comments, later lines override earlier ones).
struct ExperimentConfig {
  std::string model;             // free_gas | cosine | lennard_jones | confined_gaussian
  std::string sampler = "dhmc";  // dhmc | mh | both
  SystemParams params;
  double lj_cutoff = 2.5;
  IntegratorConfig integrator;
  MhConfig mh;
  long n_samples = 0;
  long burn_in = 0;
  long record_every = 1;
  std::uint64_t seed = 0;
  long init_n = 0;
  long fixed_n = -1;  // >= 0 freezes the dimension (jumps disabled)
  bool measure_time = false;
  long max_lag = 1000;
  int weak_error_repeats = 10;
  std::string out_dir = ".";

  // bookkeeping for resolved lines (diagnostic messages)
  std::map<std::string, int> key_lines;
};

/// Parse and validate; throws ConfigError naming the key and line.
ExperimentConfig parse_config(const std::string& path);

/// Same on in-memory text; `origin` labels error messages.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace gcdhmc
