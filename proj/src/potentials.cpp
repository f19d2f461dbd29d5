#include "gcdhmc/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace gcdhmc {

namespace {

void check_positive_distance(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("pair distance must be > 0");
}

void check_overlap(double r) {
  if (r < lj_overlap_radius)
    throw NonFiniteEnergyError("particle overlap: pair distance " + std::to_string(r));
}

}  // namespace

// ---- LJ kernels ----

double lj_phi(double r) {
  check_positive_distance(r);
  const double r6 = 1.0 / (r * r * r * r * r * r);
  return 4.0 * (r6 * r6 - r6);
}

double lj_phi_smooth(double r) {
  check_positive_distance(r);
  if (r < lj_split_radius) return -std::pow(2.0, -1.0 / 6.0) * r;
  return lj_phi(r);
}

double lj_phi_singular(double r) {
  check_positive_distance(r);
  if (r >= lj_split_radius) return 0.0;
  return lj_phi(r) - lj_phi_smooth(r);
}

double lj_dphi(double r) {
  check_positive_distance(r);
  const double inv = 1.0 / r;
  const double r6 = inv * inv * inv * inv * inv * inv;
  return (-48.0 * r6 * r6 + 24.0 * r6) * inv;
}

double lj_dphi_smooth(double r) {
  check_positive_distance(r);
  if (r < lj_split_radius) return -std::pow(2.0, -1.0 / 6.0);
  return lj_dphi(r);
}

double lj_dphi_singular(double r) {
  check_positive_distance(r);
  if (r >= lj_split_radius) return 0.0;
  return lj_dphi(r) - lj_dphi_smooth(r);
}

double lj_pressure(const ArrayXXd& positions, const SystemParams& params, double cutoff) {
  const Index n = positions.rows();
  const double box = params.box_length;
  const double volume = box * box * box;
  const double rho = static_cast<double>(n) / volume;
  if (n == 0) return 0.0;

  double virial = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (Index k = 0; k < 3; ++k) {
        double z = positions(i, k) - positions(j, k);
        z -= box * std::floor(z / box + 0.5);
        r2 += z * z;
      }
      const double r = std::sqrt(r2);
      if (r >= cutoff) continue;
      check_overlap(r);
      const double r6 = 1.0 / (r2 * r2 * r2);
      virial += 2.0 * r6 * r6 - r6;
    }
  }
  const double tail = (16.0 / 3.0) * M_PI * rho * rho *
                      ((2.0 / 3.0) * std::pow(cutoff, -9.0) - std::pow(cutoff, -3.0));
  return rho / params.beta + 8.0 / volume * virial + tail;
}

// ---- PotentialModel defaults ----

namespace {

ArrayXXd append_row(const ArrayXXd& q, const RowVec& x) {
  ArrayXXd out(q.rows() + 1, q.cols());
  out.topRows(q.rows()) = q;
  out.row(q.rows()) = x;
  return out;
}

ArrayXXd erase_row(const ArrayXXd& q, Index i) {
  ArrayXXd out(q.rows() - 1, q.cols());
  out.topRows(i) = q.topRows(i);
  out.bottomRows(q.rows() - 1 - i) = q.bottomRows(q.rows() - 1 - i);
  return out;
}

}  // namespace

double PotentialModel::insertion_energy_delta(const ArrayXXd& q, const RowVec& x) const {
  return energy(append_row(q, x)) - energy(q);
}

double PotentialModel::deletion_energy_delta(const ArrayXXd& q, Index i) const {
  return energy(erase_row(q, i)) - energy(q);
}

double PotentialModel::replacement_energy_delta(const ArrayXXd& q, const std::vector<Index>& rows,
                                                const ArrayXXd& new_rows) const {
  // remove the moved rows one by one, then insert the replacements;
  // each leg uses the model's own O(N) delta.
  double delta = 0.0;
  ArrayXXd work = q;
  std::vector<Index> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), std::greater<Index>());
  for (Index r : sorted) {
    delta += deletion_energy_delta(work, r);
    work = erase_row(work, r);
  }
  for (Index k = 0; k < new_rows.rows(); ++k) {
    delta += insertion_energy_delta(work, new_rows.row(k));
    work = append_row(work, new_rows.row(k));
  }
  return delta;
}

RowVec PotentialModel::smooth_pair_kernel(const RowVec& displacement) const {
  return RowVec::Zero(displacement.cols());
}

void PotentialModel::add_singular_gradient(const ArrayXXd&, ArrayXXd&) const {}

void PotentialModel::add_confinement_gradient(const ArrayXXd&, ArrayXXd&) const {}

double PotentialModel::confinement(const RowVec&) const { return 0.0; }

// ---- Cosine interaction ----

double CosineInteraction::energy(const ArrayXXd& q) const {
  const Index n = q.rows();
  const double w = 2.0 * M_PI / box_;
  double u = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) u += std::cos(w * (q(i, 0) - q(j, 0)));
  return u;
}

ArrayXXd CosineInteraction::gradient(const ArrayXXd& q) const {
  const Index n = q.rows();
  const double w = 2.0 * M_PI / box_;
  ArrayXXd grad = ArrayXXd::Zero(n, 1);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double s = std::sin(w * (q(i, 0) - q(j, 0)));
      grad(i, 0) -= w * s;
      grad(j, 0) += w * s;
    }
  return grad;
}

double CosineInteraction::insertion_energy_delta(const ArrayXXd& q, const RowVec& x) const {
  const double w = 2.0 * M_PI / box_;
  double delta = 0.0;
  for (Index j = 0; j < q.rows(); ++j) delta += std::cos(w * (x(0) - q(j, 0)));
  return delta;
}

double CosineInteraction::deletion_energy_delta(const ArrayXXd& q, Index i) const {
  const double w = 2.0 * M_PI / box_;
  double delta = 0.0;
  for (Index j = 0; j < q.rows(); ++j) {
    if (j == i) continue;
    delta -= std::cos(w * (q(i, 0) - q(j, 0)));
  }
  return delta;
}

RowVec CosineInteraction::smooth_pair_kernel(const RowVec& displacement) const {
  const double w = 2.0 * M_PI / box_;
  RowVec out(1);
  out(0) = -w * std::sin(w * displacement(0));
  return out;
}

// ---- Lennard-Jones ----

LennardJones::LennardJones(double box_length, double cutoff) : box_(box_length), cutoff_(cutoff) {
  if (!(cutoff > 0.0) || cutoff > box_length / 2.0)
    throw std::invalid_argument("LJ cutoff must satisfy 0 < r_c <= L/2");
}

double LennardJones::energy(const ArrayXXd& q) const {
  const Index n = q.rows();
  double u = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (Index k = 0; k < 3; ++k) {
        double z = q(i, k) - q(j, k);
        z -= box_ * std::floor(z / box_ + 0.5);
        r2 += z * z;
      }
      if (r2 > cutoff_ * cutoff_) continue;
      const double r = std::sqrt(r2);
      check_overlap(r);
      const double r6 = 1.0 / (r2 * r2 * r2);
      u += 4.0 * (r6 * r6 - r6);
    }
  }
  return u;
}

ArrayXXd LennardJones::gradient(const ArrayXXd& q) const {
  const Index n = q.rows();
  ArrayXXd grad = ArrayXXd::Zero(n, 3);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double z[3];
      double r2 = 0.0;
      for (Index k = 0; k < 3; ++k) {
        z[k] = q(i, k) - q(j, k);
        z[k] -= box_ * std::floor(z[k] / box_ + 0.5);
        r2 += z[k] * z[k];
      }
      if (r2 > cutoff_ * cutoff_) continue;
      const double r = std::sqrt(r2);
      check_overlap(r);
      const double f = lj_dphi(r) / r;  // d phi / dr times unit vector
      for (Index k = 0; k < 3; ++k) {
        grad(i, k) += f * z[k];
        grad(j, k) -= f * z[k];
      }
    }
  }
  return grad;
}

double LennardJones::pair_energy_with_row(const ArrayXXd& q, const double* x, Index skip) const {
  double u = 0.0;
  for (Index j = 0; j < q.rows(); ++j) {
    if (j == skip) continue;
    double r2 = 0.0;
    for (Index k = 0; k < 3; ++k) {
      double z = x[k] - q(j, k);
      z -= box_ * std::floor(z / box_ + 0.5);
      r2 += z * z;
    }
    if (r2 > cutoff_ * cutoff_) continue;
    const double r = std::sqrt(r2);
    check_overlap(r);
    const double r6 = 1.0 / (r2 * r2 * r2);
    u += 4.0 * (r6 * r6 - r6);
  }
  return u;
}

double LennardJones::insertion_energy_delta(const ArrayXXd& q, const RowVec& x) const {
  double row[3] = {x(0), x(1), x(2)};
  return pair_energy_with_row(q, row, -1);
}

double LennardJones::deletion_energy_delta(const ArrayXXd& q, Index i) const {
  double row[3] = {q(i, 0), q(i, 1), q(i, 2)};
  return -pair_energy_with_row(q, row, i);
}

double LennardJones::replacement_energy_delta(const ArrayXXd& q, const std::vector<Index>& rows,
                                              const ArrayXXd& new_rows) const {
  // moved-vs-rest cross terms plus the within-moved-set pairs, O(|S| N)
  const Index n = q.rows();
  const Index moved = static_cast<Index>(rows.size());
  std::vector<char> is_moved(static_cast<std::size_t>(n), 0);
  for (Index r : rows) is_moved[static_cast<std::size_t>(r)] = 1;

  auto pair_energy = [this](const double* a, const double* b) {
    double r2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      double z = a[k] - b[k];
      z -= box_ * std::floor(z / box_ + 0.5);
      r2 += z * z;
    }
    if (r2 > cutoff_ * cutoff_) return 0.0;
    const double r = std::sqrt(r2);
    check_overlap(r);
    const double r6 = 1.0 / (r2 * r2 * r2);
    return 4.0 * (r6 * r6 - r6);
  };

  double delta = 0.0;
  for (Index a = 0; a < moved; ++a) {
    const Index i = rows[static_cast<std::size_t>(a)];
    double old_row[3] = {q(i, 0), q(i, 1), q(i, 2)};
    double new_row[3] = {new_rows(a, 0), new_rows(a, 1), new_rows(a, 2)};
    for (Index j = 0; j < n; ++j) {
      if (is_moved[static_cast<std::size_t>(j)]) continue;
      double other[3] = {q(j, 0), q(j, 1), q(j, 2)};
      delta += pair_energy(new_row, other) - pair_energy(old_row, other);
    }
    for (Index b = a + 1; b < moved; ++b) {
      const Index j = rows[static_cast<std::size_t>(b)];
      double old_other[3] = {q(j, 0), q(j, 1), q(j, 2)};
      double new_other[3] = {new_rows(b, 0), new_rows(b, 1), new_rows(b, 2)};
      delta += pair_energy(new_row, new_other) - pair_energy(old_row, old_other);
    }
  }
  return delta;
}

RowVec LennardJones::smooth_pair_kernel(const RowVec& displacement) const {
  RowVec z = displacement - box_ * (displacement / box_ + 0.5).floor();
  const double r = std::sqrt(z.square().sum());
  if (r > cutoff_) return RowVec::Zero(3);
  check_overlap(r);
  return (lj_dphi_smooth(r) / r) * z;
}

void LennardJones::add_singular_gradient(const ArrayXXd& q, ArrayXXd& grad) const {
  const Index n = q.rows();
  if (n < 2) return;
  const double range = lj_split_radius;
  const int side = static_cast<int>(std::floor(box_ / range));

  if (side < 3) {
    // box too small for a 27-cell scan; fall back to the direct sum
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        double z[3];
        double r2 = 0.0;
        for (Index k = 0; k < 3; ++k) {
          z[k] = q(i, k) - q(j, k);
          z[k] -= box_ * std::floor(z[k] / box_ + 0.5);
          r2 += z[k] * z[k];
        }
        if (r2 >= range * range) continue;
        const double r = std::sqrt(r2);
        check_overlap(r);
        const double f = lj_dphi_singular(r) / r;
        for (Index k = 0; k < 3; ++k) {
          grad(i, k) += f * z[k];
          grad(j, k) -= f * z[k];
        }
      }
    }
    return;
  }

  // linked-cell pass over the short singular support (counting sort)
  const double cell = box_ / side;
  const int ncells = side * side * side;
  std::vector<std::int32_t> cell_of(n);
  std::vector<std::int32_t> count(ncells + 1, 0);
  auto cell_index = [&](double x) {
    int c = static_cast<int>(std::floor(x / cell));
    if (c >= side) c = side - 1;  // x == L guard
    if (c < 0) c = 0;
    return c;
  };
  for (Index i = 0; i < n; ++i) {
    const int cx = cell_index(q(i, 0));
    const int cy = cell_index(q(i, 1));
    const int cz = cell_index(q(i, 2));
    cell_of[i] = (cx * side + cy) * side + cz;
    ++count[cell_of[i] + 1];
  }
  for (int c = 0; c < ncells; ++c) count[c + 1] += count[c];
  std::vector<std::int32_t> order(n);
  {
    std::vector<std::int32_t> cursor(count.begin(), count.end() - 1);
    for (Index i = 0; i < n; ++i) order[cursor[cell_of[i]]++] = static_cast<std::int32_t>(i);
  }

  for (Index i = 0; i < n; ++i) {
    const int ci = cell_of[i];
    const int cx = ci / (side * side);
    const int cy = (ci / side) % side;
    const int cz = ci % side;
    for (int dx = -1; dx <= 1; ++dx) {
      const int nx = (cx + dx + side) % side;
      for (int dy = -1; dy <= 1; ++dy) {
        const int ny = (cy + dy + side) % side;
        for (int dz = -1; dz <= 1; ++dz) {
          const int nz = (cz + dz + side) % side;
          const int cj = (nx * side + ny) * side + nz;
          for (int s = count[cj]; s < count[cj + 1]; ++s) {
            const Index j = order[s];
            if (j == i) continue;
            double z[3];
            double r2 = 0.0;
            for (Index k = 0; k < 3; ++k) {
              z[k] = q(i, k) - q(j, k);
              z[k] -= box_ * std::floor(z[k] / box_ + 0.5);
              r2 += z[k] * z[k];
            }
            if (r2 >= range * range) continue;
            const double r = std::sqrt(r2);
            check_overlap(r);
            const double f = lj_dphi_singular(r) / r;
            for (Index k = 0; k < 3; ++k) grad(i, k) += f * z[k];
          }
        }
      }
    }
  }
}

// ---- factory ----

std::unique_ptr<PotentialModel> make_model(const std::string& name, const SystemParams& params,
                                           double lj_cutoff) {
  if (name == "free_gas") return std::make_unique<FreeGas>(params.dim);
  if (name == "cosine") return std::make_unique<CosineInteraction>(params.box_length);
  if (name == "lennard_jones") return std::make_unique<LennardJones>(params.box_length, lj_cutoff);
  if (name == "confined_gaussian") return std::make_unique<GaussianWell>(params.dim);
  throw std::invalid_argument("unknown model: " + name);
}

}  // namespace gcdhmc
