#include "gcdhmc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcdhmc/diagnostics.hpp"
#include "gcdhmc/dynamics.hpp"
#include "gcdhmc/mh.hpp"
#include "gcdhmc/potentials.hpp"

namespace gcdhmc {

namespace {

constexpr std::uint64_t dhmc_stream_salt = 0x64686d63;  // per-chain stream tags
constexpr std::uint64_t mh_stream_salt = 0x6d68;

std::vector<long> record_counts(const ChainTrace& trace) {
  std::vector<long> counts;
  counts.reserve(trace.records.size());
  for (const auto& rec : trace.records) counts.push_back(rec.count);
  return counts;
}

std::vector<double> record_pressures(const ChainTrace& trace) {
  std::vector<double> values;
  values.reserve(trace.records.size());
  for (const auto& rec : trace.records) values.push_back(rec.pressure);
  return values;
}

double poisson_reference_lambda(const ExperimentConfig& cfg) {
  if (cfg.model == "free_gas") return cfg.params.volume() * std::exp(cfg.params.beta * cfg.params.mu);
  // confined Gaussian: Z_beta exp(beta mu)
  return std::exp(cfg.params.log_confinement_normalizer() + cfg.params.beta * cfg.params.mu);
}

double tv_against_poisson(const std::map<long, double>& hist, double lambda) {
  long hi = 0;
  for (const auto& [k, p] : hist) hi = std::max(hi, k);
  hi = std::max<long>(hi, static_cast<long>(std::ceil(lambda + 20.0 * std::sqrt(lambda))) + 50);
  hi = std::min<long>(hi, 500);
  std::map<long, double> reference;
  double mass = 0.0;
  for (long k = 0; k <= hi; ++k) {
    reference[k] = poisson_pmf(lambda, k);
    mass += reference[k];
  }
  // fold the truncated tail into the last bin so the reference stays normalized
  reference[hi] += 1.0 - mass;
  return tv_distance(hist, reference);
}

ordered_json histogram_json(const std::map<long, double>& hist) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, p] : hist) out[std::to_string(k)] = p;
  return out;
}

ordered_json sampler_summary(const ChainTrace& trace, const ExperimentConfig& cfg) {
  ordered_json block = ordered_json::object();
  block["iterations"] = trace.iterations;
  block["records"] = static_cast<long>(trace.records.size());
  if (trace.aborted) {
    block["aborted"] = true;
    block["error"] = trace.error;
  }
  block["jump_attempts"] = trace.total_jump_attempts;
  block["jump_accepts"] = trace.total_jump_accepts;
  if (trace.records.empty()) return block;

  const auto counts = record_counts(trace);
  double mean_count = 0.0, mean_potential = 0.0;
  for (const auto& rec : trace.records) {
    mean_count += static_cast<double>(rec.count);
    mean_potential += rec.potential;
  }
  mean_count /= static_cast<double>(trace.records.size());
  mean_potential /= static_cast<double>(trace.records.size());
  block["mean_count"] = mean_count;
  block["mean_potential"] = mean_potential;

  const auto hist = normalized_histogram(counts);
  block["count_histogram"] = histogram_json(hist);

  if (cfg.model == "free_gas" || cfg.model == "confined_gaussian") {
    const double lambda = poisson_reference_lambda(cfg);
    block["poisson_lambda"] = lambda;
    block["tv_poisson"] = tv_against_poisson(hist, lambda);
  }

  if (trace.has_pressure) {
    const auto pressures = record_pressures(trace);
    double mean = 0.0;
    for (double p : pressures) mean += p;
    mean /= static_cast<double>(pressures.size());
    double var = 0.0;
    for (double p : pressures) var += (p - mean) * (p - mean);
    var /= static_cast<double>(pressures.size());
    double iact = 1.0;
    if (pressures.size() >= 2 && var > 0.0)
      iact = integrated_autocorrelation_time(pressures, cfg.max_lag);
    block["mean_pressure"] = mean;
    block["iact_pressure"] = iact;
    block["se_pressure"] = std::sqrt(var * iact / static_cast<double>(pressures.size()));
  }

  if (trace.has_time && trace.iterations > 0)
    block["wall_seconds_per_iteration"] = trace.wall_seconds / static_cast<double>(trace.iterations);
  return block;
}

ordered_json config_echo(const ExperimentConfig& cfg) {
  ordered_json out = ordered_json::object();
  out["model"] = cfg.model;
  out["sampler"] = cfg.sampler;
  out["beta"] = cfg.params.beta;
  out["mu"] = cfg.params.mu;
  out["m"] = cfg.params.mass;
  out["m_n"] = cfg.params.indicator_mass;
  if (cfg.params.boundary == Boundary::Periodic) out["L"] = cfg.params.box_length;
  out["dim"] = cfg.params.dim;
  if (cfg.model == "lennard_jones") out["r_c"] = cfg.lj_cutoff;
  out["dt_min"] = cfg.integrator.dt_min;
  out["dt_max"] = cfg.integrator.dt_max;
  out["steps_per_proposal"] = cfg.integrator.steps_per_proposal;
  out["use_rbm"] = cfg.integrator.use_rbm;
  out["rbm_batch_size"] = cfg.integrator.rbm_batch_size;
  out["rbm_printed_scaling"] = cfg.integrator.rbm_printed_scaling;
  out["n_samples"] = cfg.n_samples;
  out["burn_in"] = cfg.burn_in;
  out["record_every"] = cfg.record_every;
  out["seed"] = cfg.seed;
  out["init_n"] = cfg.init_n;
  if (cfg.fixed_n >= 0) out["fixed_n"] = cfg.fixed_n;
  out["measure_time"] = cfg.measure_time;
  out["max_lag"] = cfg.max_lag;
  out["weak_error_repeats"] = cfg.weak_error_repeats;
  out["out_dir"] = cfg.out_dir;
  if (cfg.sampler != "dhmc") {
    out["mh_prob_insert"] = cfg.mh.prob_insert;
    out["mh_prob_delete"] = cfg.mh.prob_delete;
    out["mh_prob_displace"] = cfg.mh.prob_displace;
  }
  return out;
}

}  // namespace

ArrayXXd lattice_positions(long count, const SystemParams& params) {
  const int d = params.dim;
  ArrayXXd q(count, d);
  if (count == 0) return q;
  const long side = std::max<long>(1, static_cast<long>(
      std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(d)))));
  const double spacing = params.boundary == Boundary::Periodic
                             ? params.box_length / static_cast<double>(side)
                             : 1.0 / std::sqrt(params.beta);
  for (long i = 0; i < count; ++i) {
    long rem = i;
    for (int k = 0; k < d; ++k) {
      const long cell = rem % side;
      rem /= side;
      double x = (static_cast<double>(cell) + 0.5) * spacing;
      if (params.boundary != Boundary::Periodic)
        x -= 0.5 * static_cast<double>(side) * spacing;
      q(i, k) = x;
    }
  }
  return q;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  SystemParams params = cfg.params;
  params.validate();
  const auto model = make_model(cfg.model, params, cfg.lj_cutoff);

  SampleOptions opt;
  opt.n_samples = cfg.n_samples;
  opt.burn_in = cfg.burn_in;
  opt.record_every = cfg.record_every;
  opt.measure_time = cfg.measure_time;
  if (cfg.model == "lennard_jones") {
    const double cutoff = cfg.lj_cutoff;
    const SystemParams p = params;
    opt.pressure = [p, cutoff](const ArrayXXd& q) { return lj_pressure(q, p, cutoff); };
  }
  if (cfg.model == "cosine") {
    const double box = params.box_length;
    opt.observable = [box](const ArrayXXd& q) { return cosine_test_function(q, box); };
  }

  const long init_count = cfg.fixed_n >= 0 ? cfg.fixed_n : cfg.init_n;
  const RngStream root(cfg.seed);
  ExperimentResult result;
  result.cfg = cfg;

  if (cfg.sampler == "dhmc" || cfg.sampler == "both") {
    RngStream rng = root.spawn(dhmc_stream_salt);
    PhaseState state;
    state.positions = lattice_positions(init_count, params);
    state.momenta = ArrayXXd::Zero(init_count, params.dim);
    state.indicator = static_cast<double>(init_count) + 0.5;
    state.indicator_momentum = 0.0;
    result.dhmc_trace = dhmc_sample(state, *model, params, cfg.integrator, opt, rng);
  }
  if (cfg.sampler == "mh" || cfg.sampler == "both") {
    RngStream rng = root.spawn(mh_stream_salt);
    ArrayXXd positions = lattice_positions(init_count, params);
    result.mh_trace = mh_sample(positions, *model, params, cfg.mh, opt, rng);
  }

  ordered_json summary = ordered_json::object();
  summary["config"] = config_echo(cfg);
  if (result.dhmc_trace) summary["dhmc"] = sampler_summary(*result.dhmc_trace, cfg);
  if (result.mh_trace) summary["mh"] = sampler_summary(*result.mh_trace, cfg);

  if (result.dhmc_trace && result.mh_trace && !result.dhmc_trace->records.empty() &&
      !result.mh_trace->records.empty()) {
    ordered_json cross = ordered_json::object();
    cross["tv_count_histograms"] =
        tv_distance(normalized_histogram(record_counts(*result.dhmc_trace)),
                    normalized_histogram(record_counts(*result.mh_trace)));
    if (cfg.model == "cosine") {
      double ref = 0.0;
      for (double v : result.mh_trace->observable) ref += v;
      ref /= static_cast<double>(result.mh_trace->observable.size());
      cross["mh_observable_mean"] = ref;
      cross["weak_error_printed"] = weak_error(result.dhmc_trace->observable, ref);
      cross["abs_mean_error"] = abs_mean_error(result.dhmc_trace->observable, ref);
    }
    summary["cross"] = cross;
  }
  result.summary = summary;
  return result;
}

std::string write_outputs(const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(result.cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());

  if (result.dhmc_trace) write_trace_csv(*result.dhmc_trace, (dir / "trace_dhmc.csv").string());
  if (result.mh_trace) write_trace_csv(*result.mh_trace, (dir / "trace_mh.csv").string());

  const std::string path = (dir / "summary.json").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open summary output: " + path);
  out << render_json(result.summary) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
  return path;
}

namespace {

void render(const ordered_json& value, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (value.type()) {
    case ordered_json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + ordered_json(it.key()).dump() + ": ";
        render(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        render(item, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", value.get<double>());
      out += buf;
      return;
    }
    default:
      out += value.dump();
      return;
  }
}

}  // namespace

std::string render_json(const ordered_json& value) {
  std::string out;
  render(value, out, 0);
  return out;
}

ordered_json run_sweep(const std::string& config_text, const std::string& origin,
                       const std::string& key, const std::vector<std::string>& values,
                       std::optional<std::uint64_t> seed_override) {
  if (values.empty()) throw ConfigError("sweep: no values given");

  // base out_dir from the unmodified config
  ExperimentConfig base = parse_config_text(config_text, origin);
  const std::string base_dir = base.out_dir;

  ordered_json runs = ordered_json::array();
  std::vector<double> xs, ys;
  bool numeric = true;
  for (const auto& value : values) {
    std::ostringstream text;
    text << config_text << "\n"
         << key << " = " << value << "\n"
         << "out_dir = " << base_dir << "/" << key << "_" << value << "\n";
    if (seed_override) text << "seed = " << *seed_override << "\n";
    ExperimentConfig cfg = parse_config_text(text.str(), origin + " (sweep " + key + "=" + value + ")");
    ExperimentResult result = run_experiment(cfg);
    write_outputs(result);
    runs.push_back(result.summary);

    try {
      xs.push_back(std::stod(value));
    } catch (const std::exception&) {
      numeric = false;
    }
    const char* chain = result.summary.contains("dhmc") ? "dhmc" : "mh";
    if (result.summary[chain].contains("wall_seconds_per_iteration"))
      ys.push_back(result.summary[chain]["wall_seconds_per_iteration"].get<double>());
  }

  ordered_json out = ordered_json::object();
  out["key"] = key;
  out["values"] = values;
  out["runs"] = runs;
  if (numeric && ys.size() == values.size() && xs.size() == values.size() && values.size() >= 2) {
    bool positive = true;
    for (double x : xs) positive = positive && x > 0.0;
    for (double y : ys) positive = positive && y > 0.0;
    if (positive) out["wall_time_loglog_slope"] = loglog_slope(xs, ys);
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(base_dir, ec);
  const std::string path = (fs::path(base_dir) / "sweep_summary.json").string();
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open sweep summary output: " + path);
  file << render_json(out) << '\n';
  return out;
}

}  // namespace gcdhmc
