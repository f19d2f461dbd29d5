#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gcdhmc/diagnostics.hpp"
#include "gcdhmc/dynamics.hpp"
#include "gcdhmc/rng.hpp"

using namespace gcdhmc;

namespace {

SystemParams free_gas_params(double mu = -0.5, double box = 10.0) {
  SystemParams p;
  p.beta = 1.0;
  p.mu = mu;
  p.box_length = box;
  p.dim = 1;
  return p;
}

PhaseState free_state(Index n, double indicator, double p_n) {
  PhaseState s;
  s.positions = ArrayXXd::Zero(n, 1);
  for (Index i = 0; i < n; ++i) s.positions(i, 0) = 0.5 + static_cast<double>(i);
  s.momenta = ArrayXXd::Zero(n, 1);
  s.indicator = indicator;
  s.indicator_momentum = p_n;
  return s;
}

IntegratorConfig plain_integrator(double dt_min = 0.05, double dt_max = 0.1, int steps = 5) {
  IntegratorConfig cfg;
  cfg.dt_min = dt_min;
  cfg.dt_max = dt_max;
  cfg.steps_per_proposal = steps;
  return cfg;
}

struct PoisonedModel : FreeGas {
  using FreeGas::FreeGas;
  double insertion_energy_delta(const ArrayXXd&, const RowVec&) const override {
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace

TEST_CASE("drift with zero momentum leaves positions unchanged") {
  SystemParams params = free_gas_params();
  PhaseState s = free_state(4, 4.5, 0.2);
  const ArrayXXd before = s.positions;
  verlet_half_drift(s, params, 0.1);
  CHECK((s.positions == before).all());
}

TEST_CASE("free gas kick leaves momenta unchanged") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  PhaseState s = free_state(4, 4.5, 0.2);
  s.momenta(2, 0) = 1.25;
  const ArrayXXd before = s.momenta;
  verlet_half_kick(s, model.gradient(s.positions), 0.1);
  CHECK((s.momenta == before).all());
}

TEST_CASE("one harmonic step follows the drift-first update exactly") {
  // U = q^2/2, m = 1, (q,p) = (1,0), dt = 0.1: both kicks see the mid-step
  // position, so q -> 0.995 and p -> -0.1
  SystemParams params;
  params.beta = 1.0;
  params.dim = 1;
  params.boundary = Boundary::ConfinedGaussian;
  GaussianWell model(1);
  PhaseState s;
  s.positions = ArrayXXd::Constant(1, 1, 1.0);
  s.momenta = ArrayXXd::Zero(1, 1);
  s.indicator = 1.5;
  s.indicator_momentum = 0.0;

  IntegratorConfig cfg = plain_integrator(0.1, 0.1, 1);
  cfg.jumps_enabled = false;
  RngStream rng(1);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  CHECK(events.empty());
  CHECK(s.positions(0, 0) == doctest::Approx(0.995).epsilon(1e-15));
  CHECK(s.momenta(0, 0) == doctest::Approx(-0.1).epsilon(1e-15));

  // energy error of the step is O(dt^2)
  const double h0 = 0.5;
  const double h1 = 0.5 * s.positions(0, 0) * s.positions(0, 0) +
                    0.5 * s.momenta(0, 0) * s.momenta(0, 0);
  CHECK(std::abs(h1 - h0) < 0.1 * 0.1);
}

TEST_CASE("indicator moves without a crossing") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  PhaseState s = free_state(3, 3.4, 0.5);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(2);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  CHECK(events.empty());
  CHECK(s.indicator == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(s.indicator_momentum == 0.5);
  CHECK(s.count() == 3);
}

TEST_CASE("accepted upward crossing pays the barrier into p_n") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  PhaseState s = free_state(0, 0.95, 3.0);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(3);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  REQUIRE(events.size() == 1);
  CHECK(events[0].direction == JumpDirection::Insert);
  CHECK(events[0].accepted);
  CHECK(events[0].barrier == doctest::Approx(-1.802585092994046).epsilon(1e-13));
  CHECK(events[0].kinetic_before == 3.0);
  CHECK(s.indicator_momentum == doctest::Approx(4.802585092994046).epsilon(1e-13));
  CHECK(s.count() == 1);
  CHECK(s.indicator == doctest::Approx(1.05).epsilon(1e-13));
}

TEST_CASE("downward crossing with insufficient kinetic energy bounces") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  PhaseState s = free_state(1, 1.05, -1.0);
  const ArrayXXd q_before = s.positions;
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(4);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  REQUIRE(events.size() == 1);
  CHECK(events[0].direction == JumpDirection::Delete);
  CHECK_FALSE(events[0].accepted);
  CHECK(events[0].barrier == doctest::Approx(1.802585092994046).epsilon(1e-13));
  CHECK(events[0].kinetic_before == 1.0);
  CHECK(s.indicator_momentum == 1.0);  // exact reflection
  CHECK(s.count() == 1);
  CHECK((s.positions == q_before).all());
  // reached the boundary after 0.05 of travel, reflected for the rest
  CHECK(s.indicator == doctest::Approx(1.05).epsilon(1e-13));
}

TEST_CASE("the n=0 wall always bounces with an infinite barrier") {
  SystemParams params = free_gas_params(-10.0);  // deletions essentially free
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(5);
  PhaseState s = free_state(0, 0.05, -2.0);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  REQUIRE(events.size() == 1);
  CHECK(std::isinf(events[0].barrier));
  CHECK_FALSE(events[0].accepted);
  CHECK(s.indicator == doctest::Approx(0.05).epsilon(1e-13));
  CHECK(s.indicator_momentum == 2.0);
}

TEST_CASE("two upward crossings in one move are resolved as one summed barrier") {
  SystemParams params = free_gas_params();
  params.indicator_mass = 0.05;  // one step of dt=0.1 moves n by 2
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(6);
  PhaseState s = free_state(0, 0.5, 0.7);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  REQUIRE(events.size() == 1);
  CHECK(events[0].accepted);
  // log(1/10) + 0.5 plus log(2/10) + 0.5
  const double expected = (std::log(0.1) + 0.5) + (std::log(0.2) + 0.5);
  CHECK(events[0].barrier == doctest::Approx(expected).epsilon(1e-13));
  CHECK(s.count() == 2);
  CHECK(s.indicator == doctest::Approx(2.5).epsilon(1e-12));
  // K_n bookkeeping: |p_n|/m_n dropped by exactly the (negative) barrier
  CHECK(std::abs(s.indicator_momentum) / 0.05 ==
        doctest::Approx(0.7 / 0.05 - expected).epsilon(1e-12));
}

TEST_CASE("a wall bounce mid-step can be followed by an upward crossing") {
  SystemParams params = free_gas_params();
  params.indicator_mass = 0.05;  // travel 2.0 per dt=0.1 step
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(7);
  PhaseState s = free_state(0, 0.9, -0.7);
  std::vector<JumpEvent> events;
  dhmc_step(s, model, params, cfg, 0.1, rng, events);
  REQUIRE(events.size() == 2);
  CHECK(std::isinf(events[0].barrier));
  CHECK_FALSE(events[0].accepted);
  CHECK(events[1].direction == JumpDirection::Insert);
  CHECK(events[1].accepted);
  CHECK(s.count() == 1);
  // 0.9 down to the wall, 1.1 back up across the boundary at 1
  CHECK(s.indicator == doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("jump bookkeeping invariants hold over many randomized events") {
  SystemParams params = free_gas_params();
  CosineInteraction model(10.0);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(8);

  PhaseState s = free_state(5, 5.5, 0.0);
  long accepted = 0, bounced = 0;
  for (int iter = 0; iter < 4000; ++iter) {
    resample_momenta(s, params, rng);
    const double p_n_before = s.indicator_momentum;
    const double dt = rng.uniform(0.05, 0.1);
    std::vector<JumpEvent> events;
    dhmc_step(s, model, params, cfg, dt, rng, events);
    REQUIRE(events.size() <= 1);
    if (events.empty()) {
      CHECK(s.indicator_momentum == p_n_before);
      continue;
    }
    const auto& e = events[0];
    CHECK(e.accepted == (e.kinetic_before >= e.barrier));
    CHECK(e.kinetic_before == std::abs(p_n_before));
    if (e.accepted) {
      ++accepted;
      const double k_after = std::abs(s.indicator_momentum);
      CHECK(std::abs(k_after - (e.kinetic_before - e.barrier)) <= 1e-12);
      CHECK(std::signbit(s.indicator_momentum) == std::signbit(p_n_before));
    } else {
      ++bounced;
      CHECK(s.indicator_momentum == -p_n_before);
    }
    CHECK(s.indicator >= 0.0);
    CHECK(static_cast<Index>(std::floor(s.indicator)) == s.count());
  }
  CHECK(accepted > 100);
  CHECK(bounced > 100);
}

TEST_CASE("upward-jump acceptance frequency matches min(1, exp(-beta dH))") {
  // free gas with V = 1 makes the first insertion barrier exactly -mu
  SystemParams params = free_gas_params(-0.5, 1.0);
  params.beta = 2.0;
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator();
  RngStream rng(9);

  const double barrier = 0.5;
  const double target = std::exp(-params.beta * barrier);
  const int trials = 40000;
  int accepted = 0;
  for (int t = 0; t < trials; ++t) {
    PhaseState s = free_state(0, 0.95, 0.0);
    s.indicator_momentum = std::abs(rng.laplace(params.indicator_mass / params.beta));
    std::vector<JumpEvent> events;
    dhmc_step(s, model, params, cfg, 0.1, rng, events);
    REQUIRE(events.size() == 1);
    CHECK(events[0].barrier == doctest::Approx(barrier).epsilon(1e-13));
    if (events[0].accepted) ++accepted;
  }
  const double freq = static_cast<double>(accepted) / trials;
  const double sigma = std::sqrt(target * (1.0 - target) / trials);
  CHECK(std::abs(freq - target) < 3.0 * sigma);
}

TEST_CASE("no-jump trajectories are reversible to 1e-10") {
  SystemParams params = free_gas_params();
  CosineInteraction model(10.0);
  IntegratorConfig cfg = plain_integrator();
  cfg.jumps_enabled = false;
  RngStream rng(10);

  PhaseState s = free_state(6, 6.5, 0.4);
  for (Index i = 0; i < 6; ++i) {
    s.positions(i, 0) = rng.uniform(0.0, 10.0);
    s.momenta(i, 0) = rng.normal();
  }
  const PhaseState start = s;

  std::vector<JumpEvent> events;
  const double dt = 0.08;
  for (int k = 0; k < 25; ++k) dhmc_step(s, model, params, cfg, dt, rng, events);
  s.momenta = -s.momenta;
  s.indicator_momentum = -s.indicator_momentum;
  for (int k = 0; k < 25; ++k) dhmc_step(s, model, params, cfg, dt, rng, events);
  CHECK(events.empty());

  for (Index i = 0; i < 6; ++i) {
    CHECK(std::abs(s.positions(i, 0) - start.positions(i, 0)) < 1e-10);
    CHECK(std::abs(-s.momenta(i, 0) - start.momenta(i, 0)) < 1e-10);
  }
}

TEST_CASE("energy drift shrinks like dt^2 on the cosine model") {
  SystemParams params = free_gas_params();
  CosineInteraction model(10.0);
  RngStream rng(11);

  double drift_coarse = 0.0, drift_fine = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    PhaseState init = free_state(6, 6.5, 0.0);
    for (Index i = 0; i < 6; ++i) {
      init.positions(i, 0) = rng.uniform(0.0, 10.0);
      init.momenta(i, 0) = rng.normal();
    }
    for (int half = 0; half < 2; ++half) {
      const double dt = half == 0 ? 0.05 : 0.025;
      const int steps = half == 0 ? 20 : 40;
      IntegratorConfig cfg = plain_integrator(dt, dt, steps);
      cfg.jumps_enabled = false;
      PhaseState s = init;
      const double h0 = model.energy(s.positions) + kinetic_energy(s.momenta, params.mass);
      std::vector<JumpEvent> events;
      for (int k = 0; k < steps; ++k) dhmc_step(s, model, params, cfg, dt, rng, events);
      const double h1 = model.energy(s.positions) + kinetic_energy(s.momenta, params.mass);
      (half == 0 ? drift_coarse : drift_fine) += std::abs(h1 - h0);
    }
  }
  const double ratio = drift_coarse / drift_fine;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("per-proposal indicator travel is steps * dt / m_n") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator(0.05, 0.1, 5);
  RngStream rng(12);
  SampleOptions opt;
  opt.n_samples = 1;

  for (int rep = 0; rep < 200; ++rep) {
    PhaseState s = free_state(3, 3.5, 0.0);
    dhmc_sample(s, model, params, cfg, opt, rng);
    const double travel = std::abs(s.indicator - 3.5);
    CHECK(travel >= 0.25 - 1e-12);
    CHECK(travel <= 0.5 + 1e-12);
  }
}

TEST_CASE("equal seeds give bit-identical chains") {
  SystemParams params = free_gas_params();
  CosineInteraction model(10.0);
  IntegratorConfig cfg = plain_integrator();
  SampleOptions opt;
  opt.n_samples = 100;

  PhaseState a = free_state(0, 0.5, 0.0);
  PhaseState b = free_state(0, 0.5, 0.0);
  RngStream ra(31415), rb(31415);
  const ChainTrace ta = dhmc_sample(a, model, params, cfg, opt, ra);
  const ChainTrace tb = dhmc_sample(b, model, params, cfg, opt, rb);
  REQUIRE(ta.records.size() == tb.records.size());
  for (std::size_t i = 0; i < ta.records.size(); ++i) {
    CHECK(ta.records[i].count == tb.records[i].count);
    CHECK(ta.records[i].potential == tb.records[i].potential);
    CHECK(ta.records[i].hamiltonian == tb.records[i].hamiltonian);
  }
  CHECK((a.positions == b.positions).all());
  CHECK(a.indicator == b.indicator);
}

TEST_CASE("record count follows the burn-in and thinning contract") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator();
  SampleOptions opt;
  opt.n_samples = 1003;
  opt.burn_in = 100;
  opt.record_every = 7;
  PhaseState s = free_state(0, 0.5, 0.0);
  RngStream rng(13);
  const ChainTrace trace = dhmc_sample(s, model, params, cfg, opt, rng);
  CHECK(static_cast<long>(trace.records.size()) == (1003 - 100) / 7);
  for (std::size_t i = 1; i < trace.records.size(); ++i)
    CHECK(trace.records[i].iteration > trace.records[i - 1].iteration);
}

TEST_CASE("long free-gas run approaches the Poisson count law") {
  SystemParams params = free_gas_params();
  FreeGas model(1);
  IntegratorConfig cfg = plain_integrator();
  SampleOptions opt;
  opt.n_samples = 50000;
  opt.burn_in = 5000;
  PhaseState s = PhaseState::empty(1);
  RngStream rng(17);
  const ChainTrace trace = dhmc_sample(s, model, params, cfg, opt, rng);

  std::vector<long> counts;
  for (const auto& rec : trace.records) counts.push_back(rec.count);
  const auto hist = normalized_histogram(counts);
  const double lambda = 10.0 * std::exp(-0.5);
  std::map<long, double> reference;
  double mass = 0.0;
  for (long k = 0; k <= 60; ++k) {
    reference[k] = poisson_pmf(lambda, k);
    mass += reference[k];
  }
  reference[60] += 1.0 - mass;
  CHECK(tv_distance(hist, reference) < 0.35);
}

TEST_CASE("a non-finite barrier aborts the chain with a partial trace") {
  SystemParams params = free_gas_params();
  PoisonedModel model(1);
  IntegratorConfig cfg = plain_integrator();
  SampleOptions opt;
  opt.n_samples = 5000;
  PhaseState s = free_state(0, 0.5, 0.0);
  RngStream rng(19);
  const ChainTrace trace = dhmc_sample(s, model, params, cfg, opt, rng);
  CHECK(trace.aborted);
  CHECK(trace.iterations < 5000);
  CHECK_FALSE(trace.error.empty());
}
