#pragma once

#include <vector>

#include "gcdhmc/core.hpp"
#include "gcdhmc/gce_jumps.hpp"
#include "gcdhmc/potentials.hpp"
#include "gcdhmc/rng.hpp"
#include "gcdhmc/trace.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

struct IntegratorConfig {
  double dt_min = 0.05;
  double dt_max = 0.1;
  int steps_per_proposal = 5;
  bool use_rbm = false;
  int rbm_batch_size = 2;
  bool rbm_printed_scaling = false;
  bool jumps_enabled = true;

  void validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_max))
      throw std::invalid_argument("step-size range must satisfy 0 < dt_min <= dt_max");
    if (steps_per_proposal < 1) throw std::invalid_argument("steps_per_proposal must be >= 1");
    if (rbm_batch_size < 2) throw std::invalid_argument("rbm_batch_size must be >= 2");
  }
};

/// One resolved dimension-change attempt.  accepted <=> kinetic_before >= barrier.
struct JumpEvent {
  JumpDirection direction = JumpDirection::Insert;
  double barrier = 0.0;         // delta H paid if accepted (summed over the crossings resolved together)
  double kinetic_before = 0.0;  // K_n(p_n) when the decision was made
  bool accepted = false;
  Index particle_index = -1;    // first affected slot (-1 for the n=0 wall)
};

/// q += (dt/2) p / m, wrapped into the box for periodic systems.
void verlet_half_drift(PhaseState& state, const SystemParams& params, double dt);

/// p -= (dt/2) grad.
void verlet_half_kick(PhaseState& state, const ArrayXXd& grad, double dt);

/// One discretized step: half drift, half kick, indicator move with jump
/// resolution, half kick, half drift.  Jump events are appended.
void dhmc_step(PhaseState& state, const PotentialModel& model, const SystemParams& params,
               const IntegratorConfig& cfg, double dt, RngStream& rng,
               std::vector<JumpEvent>& events);

/// Outer loop: per sample, refresh momenta, draw dt ~ UNIF[dt_min, dt_max],
/// run steps_per_proposal steps, and accept the endpoint unconditionally.
ChainTrace dhmc_sample(PhaseState& state, const PotentialModel& model, const SystemParams& params,
                       const IntegratorConfig& cfg, const SampleOptions& opt, RngStream& rng);

}  // namespace gcdhmc
