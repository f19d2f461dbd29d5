#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcdhmc/diagnostics.hpp"
#include "gcdhmc/experiment.hpp"
#include "gcdhmc/trace.hpp"

namespace {

using gcdhmc::ordered_json;

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("GCDHMC_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw gcdhmc::ConfigError(std::string("GCDHMC_SEED: not an unsigned integer: ") + raw);
  }
}

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int command_run(const std::string& config_path) {
  gcdhmc::ExperimentConfig cfg = gcdhmc::parse_config(config_path);
  if (const auto seed = seed_from_env()) cfg.seed = *seed;
  const gcdhmc::ExperimentResult result = gcdhmc::run_experiment(cfg);
  const std::string summary_path = gcdhmc::write_outputs(result);
  std::cout << "wrote " << summary_path << "\n";
  if (result.aborted()) {
    std::cerr << "chain aborted; partial trace flushed\n";
    return 2;
  }
  return 0;
}

int command_sweep(const std::string& config_path, const std::string& key,
                  const std::string& values_csv) {
  std::ifstream in(config_path);
  if (!in) throw gcdhmc::ConfigError("cannot open config file: " + config_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto values = split_values(values_csv);
  gcdhmc::run_sweep(buffer.str(), config_path, key, values, seed_from_env());
  std::cout << "swept " << key << " over " << values.size() << " values\n";
  return 0;
}

int command_analyze(const std::string& trace_path, const std::string& out_path, long max_lag) {
  const gcdhmc::ChainTrace trace = gcdhmc::read_trace_csv(trace_path);
  ordered_json out = ordered_json::object();
  out["source"] = trace_path;
  out["records"] = static_cast<long>(trace.records.size());
  if (trace.records.empty()) {
    std::cout << gcdhmc::render_json(out) << "\n";
    return 0;
  }

  std::vector<long> counts;
  std::vector<double> potentials;
  std::vector<double> pressures;
  for (const auto& rec : trace.records) {
    counts.push_back(rec.count);
    potentials.push_back(rec.potential);
    if (trace.has_pressure) pressures.push_back(rec.pressure);
  }
  double mean_count = 0.0, mean_potential = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    mean_count += static_cast<double>(counts[i]);
    mean_potential += potentials[i];
  }
  mean_count /= static_cast<double>(counts.size());
  mean_potential /= static_cast<double>(counts.size());
  out["mean_count"] = mean_count;
  out["mean_potential"] = mean_potential;

  ordered_json hist = ordered_json::object();
  for (const auto& [k, p] : gcdhmc::normalized_histogram(counts)) hist[std::to_string(k)] = p;
  out["count_histogram"] = hist;
  out["jump_attempts"] = trace.total_jump_attempts;
  out["jump_accepts"] = trace.total_jump_accepts;

  if (trace.has_pressure && pressures.size() >= 2) {
    double mean = 0.0;
    for (double p : pressures) mean += p;
    mean /= static_cast<double>(pressures.size());
    double var = 0.0;
    for (double p : pressures) var += (p - mean) * (p - mean);
    var /= static_cast<double>(pressures.size());
    out["mean_pressure"] = mean;
    if (var > 0.0) {
      const double iact = gcdhmc::integrated_autocorrelation_time(pressures, max_lag);
      out["iact_pressure"] = iact;
      out["se_pressure"] = std::sqrt(var * iact / static_cast<double>(pressures.size()));
    }
  }

  const std::string text = gcdhmc::render_json(out);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open output: " + out_path);
    file << text << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grand-canonical trans-dimensional HMC experiment driver"};
  app.require_subcommand(1);

  std::string config_path, sweep_key, sweep_values, trace_path, analyze_out;
  long analyze_max_lag = 1000;

  auto* run = app.add_subcommand("run", "execute the experiment in a config file");
  run->add_option("config", config_path, "config file path")->required();

  auto* sweep = app.add_subcommand("sweep", "repeat an experiment across a parameter sweep");
  sweep->add_option("config", config_path, "config file path")->required();
  sweep->add_option("--key", sweep_key, "config key to sweep")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();

  auto* analyze = app.add_subcommand("analyze", "recompute diagnostics from a stored trace");
  analyze->add_option("trace", trace_path, "trace CSV path")->required();
  analyze->add_option("--out", analyze_out, "write the JSON report here instead of stdout");
  analyze->add_option("--max-lag", analyze_max_lag, "autocorrelation cap");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return command_run(config_path);
    if (sweep->parsed()) return command_sweep(config_path, sweep_key, sweep_values);
    return command_analyze(trace_path, analyze_out, analyze_max_lag);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const gcdhmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
