#include <doctest.h>

#include <cmath>

#include "gcdhmc/potentials.hpp"
#include "gcdhmc/rng.hpp"

using namespace gcdhmc;

namespace {

// central finite differences of a model's energy, the reference for grads
ArrayXXd fd_gradient(const PotentialModel& model, const ArrayXXd& q, double h) {
  ArrayXXd grad(q.rows(), q.cols());
  for (Index i = 0; i < q.rows(); ++i)
    for (Index k = 0; k < q.cols(); ++k) {
      ArrayXXd plus = q, minus = q;
      plus(i, k) += h;
      minus(i, k) -= h;
      grad(i, k) = (model.energy(plus) - model.energy(minus)) / (2.0 * h);
    }
  return grad;
}

void check_gradient_matches_fd(const PotentialModel& model, const ArrayXXd& q) {
  const double h = 1e-5;
  const ArrayXXd grad = model.gradient(q);
  const ArrayXXd ref = fd_gradient(model, q, h);
  for (Index i = 0; i < q.rows(); ++i)
    for (Index k = 0; k < q.cols(); ++k) {
      const double scale = std::max(1.0, std::abs(ref(i, k)));
      CHECK(std::abs(grad(i, k) - ref(i, k)) / scale < 1e-5);
    }
}

ArrayXXd random_lj_config(Index n, double box, RngStream& rng, double min_sep = 0.9) {
  ArrayXXd q(n, 3);
  for (Index i = 0; i < n;) {
    for (int k = 0; k < 3; ++k) q(i, k) = rng.uniform(0.0, box);
    bool ok = true;
    for (Index j = 0; j < i && ok; ++j) {
      double r2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        double z = q(i, k) - q(j, k);
        z -= box * std::floor(z / box + 0.5);
        r2 += z * z;
      }
      // keep clear of the overlap guard and of the split kink
      if (r2 < min_sep * min_sep || std::abs(std::sqrt(r2) - lj_split_radius) < 1e-3) ok = false;
    }
    if (ok) ++i;
  }
  return q;
}

}  // namespace

TEST_CASE("free gas energy and gradient vanish") {
  FreeGas model(3);
  ArrayXXd empty(0, 3);
  CHECK(model.energy(empty) == 0.0);
  RngStream rng(1);
  ArrayXXd q(5, 3);
  for (Index i = 0; i < 5; ++i)
    for (int k = 0; k < 3; ++k) q(i, k) = rng.uniform(0.0, 10.0);
  CHECK(model.energy(q) == 0.0);
  CHECK((model.gradient(q) == 0.0).all());
}

TEST_CASE("cosine energy examples") {
  CosineInteraction model(10.0);
  ArrayXXd none(0, 1), one(1, 1);
  one << 3.0;
  CHECK(model.energy(none) == 0.0);
  CHECK(model.energy(one) == 0.0);
  CHECK((model.gradient(one) == 0.0).all());

  ArrayXXd pair(2, 1);
  pair << 0.0, 5.0;
  CHECK(model.energy(pair) == doctest::Approx(-1.0).epsilon(1e-14));

  ArrayXXd quarter(2, 1);
  quarter << 0.0, 2.5;
  CHECK(model.energy(quarter) == doctest::Approx(0.0).epsilon(1e-14));
  const ArrayXXd grad = model.gradient(quarter);
  CHECK(grad(0, 0) == doctest::Approx(0.6283185307179586).epsilon(1e-12));
}

TEST_CASE("cosine gradient matches finite differences") {
  CosineInteraction model(10.0);
  RngStream rng(2);
  ArrayXXd q(6, 1);
  for (Index i = 0; i < 6; ++i) q(i, 0) = rng.uniform(0.0, 10.0);
  check_gradient_matches_fd(model, q);
}

TEST_CASE("lj split identities") {
  CHECK(lj_phi(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lj_phi(lj_split_radius) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(lj_phi_smooth(lj_split_radius) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(lj_phi_singular(lj_split_radius) == 0.0);

  CHECK(lj_phi(0.5) == doctest::Approx(16128.0).epsilon(1e-13));
  CHECK(lj_phi_smooth(0.5) == doctest::Approx(-0.44544935907016964).epsilon(1e-14));
  CHECK(lj_phi_singular(0.5) == doctest::Approx(16128.445449359071).epsilon(1e-13));

  // phi_smooth + phi_singular == phi on [0.3, 3], relative 1e-12
  for (int i = 0; i <= 270; ++i) {
    const double r = 0.3 + 0.01 * i;
    const double whole = lj_phi(r);
    const double split = lj_phi_smooth(r) + lj_phi_singular(r);
    CHECK(std::abs(split - whole) <= 1e-12 * std::max(1.0, std::abs(whole)));
  }

  // singular part vanishes beyond the split radius; smooth part >= -1
  for (double r : {1.1224620483093730, 1.2, 2.0, 5.0, 40.0}) CHECK(lj_phi_singular(r) == 0.0);
  for (double r = 0.05; r < 6.0; r += 0.01) CHECK(lj_phi_smooth(r) >= -1.0 - 1e-12);

  CHECK_THROWS_AS(lj_phi(0.0), std::invalid_argument);
  CHECK_THROWS_AS(lj_phi(-1.0), std::invalid_argument);
}

TEST_CASE("lj derivative kernels match finite differences of their kernels") {
  for (double r : {0.4, 0.8, 1.05, 1.3, 2.2}) {
    const double h = 1e-6;
    CHECK(lj_dphi(r) ==
          doctest::Approx((lj_phi(r + h) - lj_phi(r - h)) / (2 * h)).epsilon(1e-6));
    CHECK(lj_dphi_smooth(r) ==
          doctest::Approx((lj_phi_smooth(r + h) - lj_phi_smooth(r - h)) / (2 * h)).epsilon(1e-6));
    CHECK(lj_dphi_singular(r) ==
          doctest::Approx((lj_phi_singular(r + h) - lj_phi_singular(r - h)) / (2 * h))
              .epsilon(1e-6));
  }
}

TEST_CASE("lj energy examples") {
  LennardJones model(12.6, 2.5);
  ArrayXXd none(0, 3), one(1, 3);
  one << 1.0, 2.0, 3.0;
  CHECK(model.energy(none) == 0.0);
  CHECK(model.energy(one) == 0.0);

  ArrayXXd pair(2, 3);
  pair << 1.0, 1.0, 1.0, 1.0 + lj_split_radius, 1.0, 1.0;
  CHECK(model.energy(pair) == doctest::Approx(-1.0).epsilon(1e-13));

  // the image convention: the same pair separated across the boundary
  ArrayXXd wrapped(2, 3);
  wrapped << 0.1, 1.0, 1.0, 12.6 - (lj_split_radius - 0.1), 1.0, 1.0;
  CHECK(model.energy(wrapped) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("lj overlap reports a non-finite-energy error") {
  LennardJones model(12.6, 2.5);
  ArrayXXd q(2, 3);
  q << 1.0, 1.0, 1.0, 1.0 + 1e-9, 1.0, 1.0;
  CHECK_THROWS_AS(model.energy(q), NonFiniteEnergyError);
  CHECK_THROWS_AS(model.gradient(q), NonFiniteEnergyError);
}

TEST_CASE("lj gradient matches finite differences at a random N=5 configuration") {
  LennardJones model(12.6, 2.5);
  RngStream rng(7);
  const ArrayXXd q = random_lj_config(5, 12.6, rng);
  check_gradient_matches_fd(model, q);
}

TEST_CASE("gaussian well gradient matches finite differences") {
  GaussianWell model(3);
  RngStream rng(8);
  ArrayXXd q(4, 3);
  for (Index i = 0; i < 4; ++i)
    for (int k = 0; k < 3; ++k) q(i, k) = rng.normal();
  check_gradient_matches_fd(model, q);
  RowVec x(3);
  x << 1.0, 2.0, 2.0;
  CHECK(model.confinement(x) == doctest::Approx(4.5).epsilon(1e-15));
}

TEST_CASE("energies are invariant under permutation and global translation") {
  RngStream rng(11);
  LennardJones lj(12.6, 2.5);
  ArrayXXd q = random_lj_config(6, 12.6, rng);

  ArrayXXd permuted(6, 3);
  const auto perm = rng.permutation(6);
  for (Index i = 0; i < 6; ++i) permuted.row(i) = q.row(static_cast<Index>(perm[static_cast<std::size_t>(i)]));
  CHECK(lj.energy(permuted) == doctest::Approx(lj.energy(q)).epsilon(1e-10));

  ArrayXXd shifted = q + 3.7;
  shifted -= 12.6 * (shifted / 12.6).floor();
  CHECK(lj.energy(shifted) == doctest::Approx(lj.energy(q)).epsilon(1e-10));

  CosineInteraction cosine(10.0);
  ArrayXXd c(5, 1);
  for (Index i = 0; i < 5; ++i) c(i, 0) = rng.uniform(0.0, 10.0);
  ArrayXXd c_shift = c + 2.3;  // raw differences unchanged
  CHECK(cosine.energy(c_shift) == doctest::Approx(cosine.energy(c)).epsilon(1e-10));
}

TEST_CASE("lj pressure examples") {
  SystemParams params;
  params.beta = 2.0;
  params.box_length = 12.6;
  params.dim = 3;

  ArrayXXd none(0, 3);
  CHECK(lj_pressure(none, params, 2.5) == 0.0);

  // two particles beyond the cutoff: only the ideal and tail terms remain
  ArrayXXd far(2, 3);
  far << 1.0, 1.0, 1.0, 7.0, 7.0, 7.0;
  const double volume = 12.6 * 12.6 * 12.6;
  const double rho = 2.0 / volume;
  const double tail = (16.0 / 3.0) * M_PI * rho * rho *
                      ((2.0 / 3.0) * std::pow(2.5, -9.0) - std::pow(2.5, -3.0));
  CHECK(lj_pressure(far, params, 2.5) == doctest::Approx(rho / 2.0 + tail).epsilon(1e-13));

  // translation invariance
  RngStream rng(13);
  ArrayXXd q = random_lj_config(8, 12.6, rng);
  ArrayXXd shifted = q + 5.21;
  shifted -= 12.6 * (shifted / 12.6).floor();
  CHECK(lj_pressure(shifted, params, 2.5) ==
        doctest::Approx(lj_pressure(q, params, 2.5)).epsilon(1e-10));
}

TEST_CASE("incremental energy deltas agree with full re-evaluation") {
  RngStream rng(17);
  SystemParams params;
  params.box_length = 12.6;
  params.dim = 3;

  LennardJones lj(12.6, 2.5);
  ArrayXXd q = random_lj_config(7, 12.6, rng);
  RowVec x(3);
  x << 6.3, 0.4, 9.9;

  ArrayXXd grown(8, 3);
  grown.topRows(7) = q;
  grown.row(7) = x;
  CHECK(lj.insertion_energy_delta(q, x) ==
        doctest::Approx(lj.energy(grown) - lj.energy(q)).epsilon(1e-10));

  ArrayXXd shrunk(6, 3);
  shrunk.topRows(3) = q.topRows(3);
  shrunk.bottomRows(3) = q.bottomRows(3);
  CHECK(lj.deletion_energy_delta(q, 3) ==
        doctest::Approx(lj.energy(shrunk) - lj.energy(q)).epsilon(1e-10));

  // replacement delta against brute force
  std::vector<Index> rows = {1, 4};
  ArrayXXd fresh(2, 3);
  fresh << 2.2, 11.5, 0.7, 9.1, 3.3, 4.4;
  ArrayXXd moved = q;
  moved.row(1) = fresh.row(0);
  moved.row(4) = fresh.row(1);
  CHECK(lj.replacement_energy_delta(q, rows, fresh) ==
        doctest::Approx(lj.energy(moved) - lj.energy(q)).epsilon(1e-10));

  CosineInteraction cosine(10.0);
  ArrayXXd c(5, 1);
  for (Index i = 0; i < 5; ++i) c(i, 0) = rng.uniform(0.0, 10.0);
  RowVec cx(1);
  cx << 4.2;
  ArrayXXd cg(6, 1);
  cg.topRows(5) = c;
  cg.row(5) = cx;
  CHECK(cosine.insertion_energy_delta(c, cx) ==
        doctest::Approx(cosine.energy(cg) - cosine.energy(c)).epsilon(1e-10));
  ArrayXXd cs(4, 1);
  cs.topRows(2) = c.topRows(2);
  cs.bottomRows(2) = c.bottomRows(2);
  CHECK(cosine.deletion_energy_delta(c, 2) ==
        doctest::Approx(cosine.energy(cs) - cosine.energy(c)).epsilon(1e-10));
}

TEST_CASE("singular gradient accumulation matches a direct sum") {
  // dense enough that many pairs sit inside the short singular support
  LennardJones model(12.6, 2.5);
  RngStream rng(19);
  const ArrayXXd q = random_lj_config(40, 12.6, rng, 0.85);

  ArrayXXd from_grid = ArrayXXd::Zero(40, 3);
  model.add_singular_gradient(q, from_grid);

  ArrayXXd direct = ArrayXXd::Zero(40, 3);
  for (Index i = 0; i < 40; ++i)
    for (Index j = 0; j < 40; ++j) {
      if (i == j) continue;
      RowVec z = q.row(i) - q.row(j);
      z -= 12.6 * (z / 12.6 + 0.5).floor();
      const double r = std::sqrt(z.square().sum());
      if (r >= lj_split_radius) continue;
      direct.row(i) += (lj_dphi_singular(r) / r) * z;
    }
  for (Index i = 0; i < 40; ++i)
    for (int k = 0; k < 3; ++k)
      CHECK(from_grid(i, k) == doctest::Approx(direct(i, k)).epsilon(1e-12));
}

TEST_CASE("full lj gradient equals smooth plus singular parts") {
  LennardJones model(12.6, 2.5);
  RngStream rng(23);
  const ArrayXXd q = random_lj_config(12, 12.6, rng, 0.85);

  ArrayXXd assembled = ArrayXXd::Zero(12, 3);
  model.add_singular_gradient(q, assembled);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < 12; ++j) {
      if (i == j) continue;
      assembled.row(i) += model.smooth_pair_kernel(q.row(i) - q.row(j));
    }
  const ArrayXXd full = model.gradient(q);
  for (Index i = 0; i < 12; ++i)
    for (int k = 0; k < 3; ++k)
      CHECK(assembled(i, k) == doctest::Approx(full(i, k)).epsilon(1e-10));
}
