#include "gcdhmc/mh.hpp"

#include <chrono>
#include <cmath>

namespace gcdhmc {

namespace {

RowVec uniform_position(const SystemParams& params, RngStream& rng) {
  RowVec x(params.dim);
  for (int k = 0; k < params.dim; ++k) x(k) = rng.uniform(0.0, params.box_length);
  return x;
}

bool metropolis(double log_ratio, RngStream& rng) {
  if (log_ratio >= 0.0) {
    rng.uniform();  // keep the draw count independent of the ratio
    return true;
  }
  return std::log(rng.uniform()) < log_ratio;
}

}  // namespace

MhMove mh_step(ArrayXXd& positions, const PotentialModel& model, const SystemParams& params,
               const MhConfig& cfg, RngStream& rng) {
  if (params.boundary != Boundary::Periodic)
    throw std::invalid_argument("the MH baseline requires a periodic model");
  const Index n = positions.rows();
  const double volume = params.volume();
  const double u = rng.uniform();
  MhMove move;

  if (u < cfg.prob_insert) {
    move.kind = MhMoveKind::Insert;
    const RowVec x = uniform_position(params, rng);
    const double delta_u = model.insertion_energy_delta(positions, x);
    const double log_acc = std::log(volume) + params.beta * params.mu -
                           params.beta * delta_u - std::log(static_cast<double>(n) + 1.0);
    if (metropolis(log_acc, rng)) {
      move.accepted = true;
      positions.conservativeResize(n + 1, Eigen::NoChange);
      positions.row(n) = x;
    }
    return move;
  }

  if (u < cfg.prob_insert + cfg.prob_delete) {
    move.kind = MhMoveKind::Delete;
    if (n == 0) return move;  // nothing to delete: rejected step
    const Index i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    const double delta_u = model.deletion_energy_delta(positions, i);
    const double log_acc = std::log(static_cast<double>(n)) - params.beta * params.mu -
                           params.beta * delta_u - std::log(volume);
    if (metropolis(log_acc, rng)) {
      move.accepted = true;
      const Index tail = n - 1 - i;
      if (tail > 0) positions.middleRows(i, tail) = positions.bottomRows(tail).eval();
      positions.conservativeResize(n - 1, Eigen::NoChange);
    }
    return move;
  }

  move.kind = MhMoveKind::Displace;
  const Index k = n / 5;
  if (k == 0) {
    move.accepted = true;  // no-op proposal
    return move;
  }
  const auto perm = rng.permutation(static_cast<std::size_t>(n));
  std::vector<Index> rows(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) rows[static_cast<std::size_t>(j)] = static_cast<Index>(perm[static_cast<std::size_t>(j)]);
  ArrayXXd fresh(k, params.dim);
  for (Index j = 0; j < k; ++j) fresh.row(j) = uniform_position(params, rng);
  const double delta_u = model.replacement_energy_delta(positions, rows, fresh);
  if (metropolis(-params.beta * delta_u, rng)) {
    move.accepted = true;
    for (Index j = 0; j < k; ++j) positions.row(rows[static_cast<std::size_t>(j)]) = fresh.row(j);
  }
  return move;
}

ChainTrace mh_sample(ArrayXXd& positions, const PotentialModel& model, const SystemParams& params,
                     const MhConfig& cfg, const SampleOptions& opt, RngStream& rng) {
  cfg.validate();
  opt.validate();
  params.validate();

  ChainTrace trace;
  trace.has_pressure = static_cast<bool>(opt.pressure);
  trace.has_time = opt.measure_time;
  trace.iterations = opt.n_samples;

  const auto start = std::chrono::steady_clock::now();
  for (long iter = 1; iter <= opt.n_samples; ++iter) {
    try {
      const MhMove move = mh_step(positions, model, params, cfg, rng);
      if (move.kind != MhMoveKind::Displace) {
        trace.total_jump_attempts += 1;
        trace.total_jump_accepts += move.accepted ? 1 : 0;
      }
    } catch (const std::exception& err) {
      trace.aborted = true;
      trace.error = err.what();
      trace.iterations = iter - 1;
      break;
    }

    if (iter > opt.burn_in && (iter - opt.burn_in) % opt.record_every == 0) {
      TraceRecord rec;
      rec.iteration = iter;
      rec.count = static_cast<long>(positions.rows());
      rec.potential = model.energy(positions);
      if (opt.pressure) rec.pressure = opt.pressure(positions);
      rec.jump_attempts = trace.total_jump_attempts;
      rec.jump_accepts = trace.total_jump_accepts;
      if (opt.measure_time)
        rec.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      trace.records.push_back(rec);
      if (opt.observable) trace.observable.push_back(opt.observable(positions));
    }
  }
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace gcdhmc
