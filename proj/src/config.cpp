#include "gcdhmc/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace gcdhmc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  std::ostringstream out;
  out << origin;
  if (line > 0) out << ":" << line;
  out << ": " << message;
  throw ConfigError(out.str());
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': expected a number, got '" + value + "'");
  }
}

long parse_long(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& origin, int line, const std::string& key,
                        const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(origin, line, "key '" + key + "': expected true/false, got '" + value + "'");
}

const std::set<std::string> known_keys = {
    "model", "sampler", "beta", "mu", "m", "m_n", "L", "dim", "r_c",
    "dt_min", "dt_max", "steps_per_proposal", "use_rbm", "rbm_batch_size",
    "rbm_printed_scaling", "n_samples", "burn_in", "record_every", "seed",
    "init_n", "fixed_n", "measure_time", "max_lag", "weak_error_repeats",
    "out_dir", "mh_prob_insert", "mh_prob_delete", "mh_prob_displace"};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool dim_set = false, record_every_set = false, use_rbm_set = false, dt_set = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(origin, line_no, "expected 'key = value'");
    if (!known_keys.count(key)) fail(origin, line_no, "unknown key '" + key + "'");
    seen.insert(key);
    cfg.key_lines[key] = line_no;

    if (key == "model") cfg.model = value;
    else if (key == "sampler") cfg.sampler = value;
    else if (key == "beta") cfg.params.beta = parse_double(origin, line_no, key, value);
    else if (key == "mu") cfg.params.mu = parse_double(origin, line_no, key, value);
    else if (key == "m") cfg.params.mass = parse_double(origin, line_no, key, value);
    else if (key == "m_n") cfg.params.indicator_mass = parse_double(origin, line_no, key, value);
    else if (key == "L") cfg.params.box_length = parse_double(origin, line_no, key, value);
    else if (key == "dim") { cfg.params.dim = static_cast<int>(parse_long(origin, line_no, key, value)); dim_set = true; }
    else if (key == "r_c") cfg.lj_cutoff = parse_double(origin, line_no, key, value);
    else if (key == "dt_min") { cfg.integrator.dt_min = parse_double(origin, line_no, key, value); dt_set = true; }
    else if (key == "dt_max") { cfg.integrator.dt_max = parse_double(origin, line_no, key, value); dt_set = true; }
    else if (key == "steps_per_proposal") cfg.integrator.steps_per_proposal = static_cast<int>(parse_long(origin, line_no, key, value));
    else if (key == "use_rbm") { cfg.integrator.use_rbm = parse_bool(origin, line_no, key, value); use_rbm_set = true; }
    else if (key == "rbm_batch_size") cfg.integrator.rbm_batch_size = static_cast<int>(parse_long(origin, line_no, key, value));
    else if (key == "rbm_printed_scaling") cfg.integrator.rbm_printed_scaling = parse_bool(origin, line_no, key, value);
    else if (key == "n_samples") cfg.n_samples = parse_long(origin, line_no, key, value);
    else if (key == "burn_in") cfg.burn_in = parse_long(origin, line_no, key, value);
    else if (key == "record_every") { cfg.record_every = parse_long(origin, line_no, key, value); record_every_set = true; }
    else if (key == "seed") cfg.seed = parse_u64(origin, line_no, key, value);
    else if (key == "init_n") cfg.init_n = parse_long(origin, line_no, key, value);
    else if (key == "fixed_n") cfg.fixed_n = parse_long(origin, line_no, key, value);
    else if (key == "measure_time") cfg.measure_time = parse_bool(origin, line_no, key, value);
    else if (key == "max_lag") cfg.max_lag = parse_long(origin, line_no, key, value);
    else if (key == "weak_error_repeats") cfg.weak_error_repeats = static_cast<int>(parse_long(origin, line_no, key, value));
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "mh_prob_insert") cfg.mh.prob_insert = parse_double(origin, line_no, key, value);
    else if (key == "mh_prob_delete") cfg.mh.prob_delete = parse_double(origin, line_no, key, value);
    else if (key == "mh_prob_displace") cfg.mh.prob_displace = parse_double(origin, line_no, key, value);
  }

  auto line_of = [&](const std::string& key) {
    auto it = cfg.key_lines.find(key);
    return it == cfg.key_lines.end() ? 0 : it->second;
  };

  // required keys
  for (const char* key : {"model", "n_samples", "seed"})
    if (!seen.count(key)) fail(origin, 0, std::string("missing required key '") + key + "'");

  // model-dependent defaults and shape checks
  if (cfg.model == "free_gas") {
    if (!dim_set) cfg.params.dim = 1;
  } else if (cfg.model == "cosine") {
    if (!dim_set) cfg.params.dim = 1;
    if (cfg.params.dim != 1) fail(origin, line_of("dim"), "key 'dim': the cosine model is 1-D");
  } else if (cfg.model == "lennard_jones") {
    if (!dim_set) cfg.params.dim = 3;
    if (cfg.params.dim != 3) fail(origin, line_of("dim"), "key 'dim': the Lennard-Jones model is 3-D");
    if (!record_every_set) cfg.record_every = 100;
    if (!use_rbm_set) cfg.integrator.use_rbm = true;
    if (!dt_set) { cfg.integrator.dt_min = 0.001; cfg.integrator.dt_max = 0.003; }
  } else if (cfg.model == "confined_gaussian") {
    if (!dim_set) cfg.params.dim = 1;
    cfg.params.boundary = Boundary::ConfinedGaussian;
  } else {
    fail(origin, line_of("model"), "key 'model': unknown model '" + cfg.model + "'");
  }

  if (cfg.params.boundary == Boundary::Periodic && !seen.count("L"))
    fail(origin, 0, "missing required key 'L' (periodic models need a box length)");

  // value checks, reported against their keys
  if (cfg.sampler != "dhmc" && cfg.sampler != "mh" && cfg.sampler != "both")
    fail(origin, line_of("sampler"), "key 'sampler': expected dhmc | mh | both");
  if (!(cfg.params.beta > 0.0)) fail(origin, line_of("beta"), "key 'beta': must be > 0");
  if (!(cfg.params.mass > 0.0)) fail(origin, line_of("m"), "key 'm': must be > 0");
  if (!(cfg.params.indicator_mass > 0.0)) fail(origin, line_of("m_n"), "key 'm_n': must be > 0");
  if (cfg.params.dim < 1) fail(origin, line_of("dim"), "key 'dim': must be >= 1");
  if (cfg.params.boundary == Boundary::Periodic && !(cfg.params.box_length > 0.0))
    fail(origin, line_of("L"), "key 'L': must be > 0");
  if (cfg.model == "lennard_jones" &&
      (!(cfg.lj_cutoff > 0.0) || cfg.lj_cutoff > cfg.params.box_length / 2.0))
    fail(origin, line_of("r_c"), "key 'r_c': must satisfy 0 < r_c <= L/2");
  if (!(cfg.integrator.dt_min > 0.0) || cfg.integrator.dt_min > cfg.integrator.dt_max)
    fail(origin, line_of("dt_min"), "keys 'dt_min'/'dt_max': need 0 < dt_min <= dt_max");
  if (cfg.integrator.steps_per_proposal < 1)
    fail(origin, line_of("steps_per_proposal"), "key 'steps_per_proposal': must be >= 1");
  if (cfg.integrator.rbm_batch_size < 2)
    fail(origin, line_of("rbm_batch_size"), "key 'rbm_batch_size': must be >= 2");
  if (cfg.n_samples < 1) fail(origin, line_of("n_samples"), "key 'n_samples': must be >= 1");
  if (cfg.burn_in < 0) fail(origin, line_of("burn_in"), "key 'burn_in': must be >= 0");
  if (cfg.burn_in >= cfg.n_samples)
    fail(origin, line_of("burn_in"), "key 'burn_in': must be smaller than n_samples");
  if (cfg.record_every < 1)
    fail(origin, line_of("record_every"), "key 'record_every': must be >= 1");
  if (cfg.init_n < 0) fail(origin, line_of("init_n"), "key 'init_n': must be >= 0");
  if (cfg.max_lag < 1) fail(origin, line_of("max_lag"), "key 'max_lag': must be >= 1");
  if (cfg.weak_error_repeats < 1)
    fail(origin, line_of("weak_error_repeats"), "key 'weak_error_repeats': must be >= 1");
  if (cfg.mh.prob_insert < 0.0 || cfg.mh.prob_delete < 0.0 || cfg.mh.prob_displace < 0.0 ||
      std::abs(cfg.mh.prob_insert + cfg.mh.prob_delete + cfg.mh.prob_displace - 1.0) > 1e-12)
    fail(origin, line_of("mh_prob_insert"),
         "keys 'mh_prob_*': probabilities must be nonnegative and sum to 1");
  if ((cfg.sampler == "mh" || cfg.sampler == "both") &&
      cfg.params.boundary != Boundary::Periodic)
    fail(origin, line_of("sampler"), "key 'sampler': the MH baseline needs a periodic model");
  if (cfg.fixed_n >= 0) cfg.integrator.jumps_enabled = false;

  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

}  // namespace gcdhmc
