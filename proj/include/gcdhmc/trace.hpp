#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gcdhmc/types.hpp"

namespace gcdhmc {

struct TraceRecord {
  long iteration = 0;         // absolute 1-based proposal index
  long count = 0;             // particle number N
  double potential = 0.0;     // U(q^N)
  double hamiltonian = 0.0;   // extended H (DHMC only)
  double pressure = 0.0;      // LJ only
  long jump_attempts = 0;     // cumulative
  long jump_accepts = 0;      // cumulative
  double elapsed_seconds = 0.0;
};

struct ChainTrace {
  std::vector<TraceRecord> records;
  bool has_hamiltonian = false;
  bool has_pressure = false;
  bool has_time = false;
  std::vector<double> observable;  // optional per-record test-function values
  long total_jump_attempts = 0;
  long total_jump_accepts = 0;
  long iterations = 0;
  double wall_seconds = 0.0;
  bool aborted = false;
  std::string error;
};

/// Shared knobs of one sampling run.  pressure/observable, when set, are
/// evaluated on the positions at every recorded iteration.
struct SampleOptions {
  long n_samples = 0;
  long burn_in = 0;
  long record_every = 1;
  std::function<double(const ArrayXXd&)> pressure;
  std::function<double(const ArrayXXd&)> observable;
  bool measure_time = false;

  void validate() const {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  }
};

/// Fixed header `iter,N,U,H,pressure,jump_attempts,jump_accepts,elapsed_s`;
/// columns a trace does not carry are left empty.  Floats use 17
/// significant digits.
void write_trace_csv(const ChainTrace& trace, const std::string& path);

ChainTrace read_trace_csv(const std::string& path);

}  // namespace gcdhmc
