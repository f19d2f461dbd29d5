#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcdhmc/config.hpp"
#include "gcdhmc/trace.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

using ordered_json = nlohmann::ordered_json;

struct ExperimentResult {
  ExperimentConfig cfg;
  std::optional<ChainTrace> dhmc_trace;
  std::optional<ChainTrace> mh_trace;
  ordered_json summary;

  bool aborted() const {
    return (dhmc_trace && dhmc_trace->aborted) || (mh_trace && mh_trace->aborted);
  }
};

/// Deterministic lattice placement of `count` particles (periodic: grid in
/// the box; confined: grid centred on the origin).
ArrayXXd lattice_positions(long count, const SystemParams& params);

/// Run the configured sampler(s) and assemble the summary document.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Write trace CSVs and summary.json into cfg.out_dir.
/// Returns the summary path.
std::string write_outputs(const ExperimentResult& result);

/// Serialize with floats at 17 significant digits (round-trip exact).
std::string render_json(const ordered_json& value);

/// Re-run the experiment once per value of `key` (each run re-parses the
/// config text with `key = value` and a per-value out_dir appended) and
/// collect the summaries.  When timing is enabled and the values are
/// numeric, a log-log slope of wall time per iteration is included.
ordered_json run_sweep(const std::string& config_text, const std::string& origin,
                       const std::string& key, const std::vector<std::string>& values,
                       std::optional<std::uint64_t> seed_override);

}  // namespace gcdhmc
