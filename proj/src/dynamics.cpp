#include "gcdhmc/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gcdhmc/rbm.hpp"

namespace gcdhmc {

namespace {

constexpr int max_resolutions_per_step = 8;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }  // sign(0) = +1

ArrayXXd compute_gradient(const ArrayXXd& positions, const PotentialModel& model,
                          const IntegratorConfig& cfg, RngStream& rng) {
  if (!cfg.use_rbm) return model.gradient(positions);
  const BatchPartition part = shuffle_batches(positions.rows(), cfg.rbm_batch_size, rng);
  return rbm_gradient(positions, model, part, cfg.rbm_printed_scaling);
}

// Transport the indicator by dt/m_n, resolving every integer crossing.
// Crossings covered by one sweep of travel are resolved together: their
// proposals are sampled consecutively on the growing/shrinking working
// configuration and their barriers summed into a single accept test.  A
// bounce reflects the indicator off the first boundary and the leftover
// travel continues in the reversed direction.
void move_indicator(PhaseState& state, const PotentialModel& model, const SystemParams& params,
                    double dt, RngStream& rng, std::vector<JumpEvent>& events) {
  const double m_n = params.indicator_mass;
  double remaining = dt / m_n;
  double dir = sign_of(state.indicator_momentum);
  double n_pos = state.indicator;
  Index n_cur = state.count();  // current interval [n_cur, n_cur + 1]
  int resolutions = 0;

  while (remaining > 0.0) {
    const double dist = dir > 0.0 ? (static_cast<double>(n_cur) + 1.0 - n_pos)
                                  : (n_pos - static_cast<double>(n_cur));
    // moving up, landing exactly on the boundary counts as a crossing
    // (the state belongs to the interval above); moving down it does not
    const bool crossing = dir > 0.0 ? (remaining >= dist) : (remaining > dist);
    if (!crossing) {
      n_pos += dir * remaining;
      remaining = 0.0;
      break;
    }

    remaining -= dist;
    const double first_boundary = dir > 0.0 ? static_cast<double>(n_cur) + 1.0
                                            : static_cast<double>(n_cur);
    n_pos = first_boundary;

    if (++resolutions > max_resolutions_per_step)
      throw SamplerError("indicator crossed more than 8 resolutions in one step");

    // how many further boundaries the leftover travel covers in this direction
    long extra = dir > 0.0 ? static_cast<long>(std::floor(remaining))
                           : (remaining > 0.0 ? static_cast<long>(std::ceil(remaining)) - 1 : 0);

    PhaseState work;
    work.positions = state.positions;
    work.momenta = state.momenta;
    double barrier_sum = 0.0;
    Index first_slot = -1;
    long crossings = 0;

    for (long c = 0; c <= extra; ++c) {
      if (dir > 0.0) {
        const JumpProposal prop = propose_insert(work, params, rng);
        barrier_sum += barrier_insert(work, prop, model, params);
        if (first_slot < 0) first_slot = work.count();
        apply_jump(work, prop, true);
      } else {
        if (work.count() == 0) {
          barrier_sum = std::numeric_limits<double>::infinity();  // wall at n = 0
        } else {
          const JumpProposal prop = propose_delete(work, rng);
          barrier_sum += barrier_delete(work, prop, model, params);
          if (first_slot < 0) first_slot = prop.delete_index;
          apply_jump(work, prop, true);
        }
      }
      ++crossings;
      if (!std::isfinite(barrier_sum)) break;
    }

    const double kinetic =
        laplace_kinetic(state.indicator_momentum, params.indicator_mass);
    const bool accepted = kinetic >= barrier_sum;

    JumpEvent event;
    event.direction = dir > 0.0 ? JumpDirection::Insert : JumpDirection::Delete;
    event.barrier = barrier_sum;
    event.kinetic_before = kinetic;
    event.accepted = accepted;
    event.particle_index = first_slot;
    events.push_back(event);

    if (accepted) {
      state.positions = std::move(work.positions);
      state.momenta = std::move(work.momenta);
      state.indicator_momentum -= dir * m_n * barrier_sum;
      n_cur += dir > 0.0 ? crossings : -crossings;
      n_pos = first_boundary + dir * remaining;
      remaining = 0.0;
      break;
    }

    // bounce: flip p_n, reflect off the first boundary, keep travelling
    state.indicator_momentum = -state.indicator_momentum;
    dir = -dir;
  }

  // a bounce with zero leftover travel can leave n exactly on the upper
  // boundary of its interval; nudge inside to keep floor(n) == N
  if (n_pos == static_cast<double>(n_cur) + 1.0)
    n_pos = std::nextafter(n_pos, static_cast<double>(n_cur));
  state.indicator = n_pos;
}

}  // namespace

void verlet_half_drift(PhaseState& state, const SystemParams& params, double dt) {
  if (state.count() == 0) return;
  state.positions += (0.5 * dt / params.mass) * state.momenta;
  if (params.boundary == Boundary::Periodic) wrap_positions(state.positions, params.box_length);
}

void verlet_half_kick(PhaseState& state, const ArrayXXd& grad, double dt) {
  if (state.count() == 0) return;
  state.momenta -= (0.5 * dt) * grad;
}

void dhmc_step(PhaseState& state, const PotentialModel& model, const SystemParams& params,
               const IntegratorConfig& cfg, double dt, RngStream& rng,
               std::vector<JumpEvent>& events) {
  verlet_half_drift(state, params, dt);

  ArrayXXd grad = compute_gradient(state.positions, model, cfg, rng);
  verlet_half_kick(state, grad, dt);

  if (cfg.jumps_enabled) {
    const Index count_before = state.count();
    move_indicator(state, model, params, dt, rng, events);
    // the particle set changed: the cached gradient (and any batch
    // partition) no longer matches, so rebuild for the second kick
    if (state.count() != count_before)
      grad = compute_gradient(state.positions, model, cfg, rng);
  }

  verlet_half_kick(state, grad, dt);
  verlet_half_drift(state, params, dt);
}

ChainTrace dhmc_sample(PhaseState& state, const PotentialModel& model, const SystemParams& params,
                       const IntegratorConfig& cfg, const SampleOptions& opt, RngStream& rng) {
  cfg.validate();
  opt.validate();
  params.validate();

  ChainTrace trace;
  trace.has_hamiltonian = true;
  trace.has_pressure = static_cast<bool>(opt.pressure);
  trace.has_time = opt.measure_time;
  trace.iterations = opt.n_samples;

  std::vector<JumpEvent> events;
  const auto start = std::chrono::steady_clock::now();

  for (long iter = 1; iter <= opt.n_samples; ++iter) {
    try {
      resample_momenta(state, params, rng);
      const double dt = rng.uniform(cfg.dt_min, cfg.dt_max);
      events.clear();
      for (int s = 0; s < cfg.steps_per_proposal; ++s)
        dhmc_step(state, model, params, cfg, dt, rng, events);
      trace.total_jump_attempts += static_cast<long>(events.size());
      for (const auto& e : events) trace.total_jump_accepts += e.accepted ? 1 : 0;
    } catch (const std::exception& err) {
      trace.aborted = true;
      trace.error = err.what();
      trace.iterations = iter - 1;
      break;
    }

    if (iter > opt.burn_in && (iter - opt.burn_in) % opt.record_every == 0) {
      TraceRecord rec;
      rec.iteration = iter;
      rec.count = static_cast<long>(state.count());
      rec.potential = model.energy(state.positions);
      rec.hamiltonian = extended_hamiltonian_with_energy(state, rec.potential, params);
      if (opt.pressure) rec.pressure = opt.pressure(state.positions);
      rec.jump_attempts = trace.total_jump_attempts;
      rec.jump_accepts = trace.total_jump_accepts;
      if (opt.measure_time)
        rec.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      trace.records.push_back(rec);
      if (opt.observable) trace.observable.push_back(opt.observable(state.positions));
    }
  }

  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace gcdhmc
