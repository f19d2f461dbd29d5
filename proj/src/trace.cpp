#include "gcdhmc/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gcdhmc {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_trace_csv(const ChainTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace output: " + path);
  out << "iter,N,U,H,pressure,jump_attempts,jump_accepts,elapsed_s\n";
  for (const auto& rec : trace.records) {
    out << rec.iteration << ',' << rec.count << ',' << format_double(rec.potential) << ',';
    if (trace.has_hamiltonian) out << format_double(rec.hamiltonian);
    out << ',';
    if (trace.has_pressure) out << format_double(rec.pressure);
    out << ',' << rec.jump_attempts << ',' << rec.jump_accepts << ',';
    if (trace.has_time) out << format_double(rec.elapsed_seconds);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ChainTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file: " + path);
  if (line != "iter,N,U,H,pressure,jump_attempts,jump_accepts,elapsed_s")
    throw std::runtime_error("unrecognized trace header in " + path);

  ChainTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 8) throw std::runtime_error("malformed trace row in " + path);
    TraceRecord rec;
    rec.iteration = std::stol(fields[0]);
    rec.count = std::stol(fields[1]);
    rec.potential = std::stod(fields[2]);
    if (!fields[3].empty()) {
      rec.hamiltonian = std::stod(fields[3]);
      trace.has_hamiltonian = true;
    }
    if (!fields[4].empty()) {
      rec.pressure = std::stod(fields[4]);
      trace.has_pressure = true;
    }
    rec.jump_attempts = std::stol(fields[5]);
    rec.jump_accepts = std::stol(fields[6]);
    if (!fields[7].empty()) {
      rec.elapsed_seconds = std::stod(fields[7]);
      trace.has_time = true;
    }
    trace.records.push_back(rec);
  }
  if (!trace.records.empty()) {
    trace.total_jump_attempts = trace.records.back().jump_attempts;
    trace.total_jump_accepts = trace.records.back().jump_accepts;
    trace.iterations = trace.records.back().iteration;
  }
  return trace;
}

}  // namespace gcdhmc
