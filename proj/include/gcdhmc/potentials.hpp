#pragma once

#include <memory>
#include <vector>

#include "gcdhmc/types.hpp"

namespace gcdhmc {

// ---- Lennard-Jones pair kernel and its smooth/singular split ----
//
// phi(r) = 4 (r^-12 - r^-6).  The smooth branch replaces the singular core
// by a line of slope -2^(-1/6) below the potential minimum; the singular
// remainder is supported on (0, 2^(1/6)) only.

inline constexpr double lj_split_radius = 1.1224620483093730;  // 2^(1/6)
inline constexpr double lj_overlap_radius = 1e-8;

double lj_phi(double r);
double lj_phi_smooth(double r);     // linear core branch, LJ tail
double lj_phi_singular(double r);   // phi - phi_smooth
double lj_dphi(double r);
double lj_dphi_smooth(double r);
double lj_dphi_singular(double r);

/// Virial pressure estimate with analytic tail correction:
/// rho/beta + (8/V) sum_{i<j, r<r_c} [2 r^-12 - r^-6]
///          + (16/3) pi rho^2 [(2/3) r_c^-9 - r_c^-3].
double lj_pressure(const ArrayXXd& positions, const SystemParams& params, double cutoff);

// ---- Model interface ----
//
// gradient() returns the full nabla U (N x d).  For the random-batch path
// the pairwise part of nabla U splits as smooth_pair_kernel (batched) plus
// add_singular_gradient (always fully summed), and add_confinement_gradient
// supplies the one-body term.

class PotentialModel {
 public:
  virtual ~PotentialModel() = default;

  virtual int dim() const = 0;
  virtual double energy(const ArrayXXd& positions) const = 0;
  virtual ArrayXXd gradient(const ArrayXXd& positions) const = 0;

  /// U(q + x) - U(q), O(N).
  virtual double insertion_energy_delta(const ArrayXXd& positions, const RowVec& x) const;
  /// U(q without row i) - U(q), O(N).
  virtual double deletion_energy_delta(const ArrayXXd& positions, Index i) const;
  /// Energy change when the given rows move to new positions.
  virtual double replacement_energy_delta(const ArrayXXd& positions,
                                          const std::vector<Index>& rows,
                                          const ArrayXXd& new_rows) const;

  /// Smooth pairwise kernel K2 on the raw row difference q_i - q_j
  /// (models apply their own image convention internally).
  virtual RowVec smooth_pair_kernel(const RowVec& displacement) const;
  /// Accumulate the singular short-range kernel K1 over all pairs.
  virtual void add_singular_gradient(const ArrayXXd& positions, ArrayXXd& grad) const;
  /// Accumulate the one-body confining gradient.
  virtual void add_confinement_gradient(const ArrayXXd& positions, ArrayXXd& grad) const;

  /// Confining potential V(x); 0 for periodic models.
  virtual double confinement(const RowVec& x) const;
};

/// U == 0: ideal gas in a periodic box.
class FreeGas : public PotentialModel {
 public:
  explicit FreeGas(int dim) : dim_(dim) {}
  int dim() const override { return dim_; }
  double energy(const ArrayXXd&) const override { return 0.0; }
  ArrayXXd gradient(const ArrayXXd& q) const override { return ArrayXXd::Zero(q.rows(), q.cols()); }
  double insertion_energy_delta(const ArrayXXd&, const RowVec&) const override { return 0.0; }
  double deletion_energy_delta(const ArrayXXd&, Index) const override { return 0.0; }
  double replacement_energy_delta(const ArrayXXd&, const std::vector<Index>&,
                                  const ArrayXXd&) const override {
    return 0.0;
  }

 private:
  int dim_;
};

/// 1-D pair interaction U = sum_{i<j} cos(2 pi (q_i - q_j) / L); the raw
/// difference is used directly since the kernel is already L-periodic.
class CosineInteraction : public PotentialModel {
 public:
  explicit CosineInteraction(double box_length) : box_(box_length) {}
  int dim() const override { return 1; }
  double energy(const ArrayXXd& q) const override;
  ArrayXXd gradient(const ArrayXXd& q) const override;
  double insertion_energy_delta(const ArrayXXd& q, const RowVec& x) const override;
  double deletion_energy_delta(const ArrayXXd& q, Index i) const override;
  RowVec smooth_pair_kernel(const RowVec& displacement) const override;

 private:
  double box_;
};

/// 3-D Lennard-Jones fluid in a periodic box, minimum image, truncated at
/// the cutoff.  The singular kernel is accumulated through a linked-cell
/// grid sized to its short support.
class LennardJones : public PotentialModel {
 public:
  LennardJones(double box_length, double cutoff);
  int dim() const override { return 3; }
  double energy(const ArrayXXd& q) const override;
  ArrayXXd gradient(const ArrayXXd& q) const override;
  double insertion_energy_delta(const ArrayXXd& q, const RowVec& x) const override;
  double deletion_energy_delta(const ArrayXXd& q, Index i) const override;
  double replacement_energy_delta(const ArrayXXd& q, const std::vector<Index>& rows,
                                  const ArrayXXd& new_rows) const override;
  RowVec smooth_pair_kernel(const RowVec& displacement) const override;
  void add_singular_gradient(const ArrayXXd& q, ArrayXXd& grad) const override;

  double cutoff() const { return cutoff_; }

 private:
  double pair_energy_with_row(const ArrayXXd& q, const double* x, Index skip) const;

  double box_;
  double cutoff_;
};

/// Non-interacting particles in a Gaussian well V(q) = |q|^2 / 2 on full
/// space (the confined-boundary built-in).
class GaussianWell : public PotentialModel {
 public:
  explicit GaussianWell(int dim) : dim_(dim) {}
  int dim() const override { return dim_; }
  double energy(const ArrayXXd& q) const override { return 0.5 * q.square().sum(); }
  ArrayXXd gradient(const ArrayXXd& q) const override { return q; }
  double insertion_energy_delta(const ArrayXXd&, const RowVec& x) const override {
    return 0.5 * x.square().sum();
  }
  double deletion_energy_delta(const ArrayXXd& q, Index i) const override {
    return -0.5 * q.row(i).square().sum();
  }
  void add_confinement_gradient(const ArrayXXd& q, ArrayXXd& grad) const override { grad += q; }
  double confinement(const RowVec& x) const override { return 0.5 * x.square().sum(); }

 private:
  int dim_;
};

/// Instantiate a model by name ("free_gas", "cosine", "lennard_jones",
/// "confined_gaussian") against the given parameters.
std::unique_ptr<PotentialModel> make_model(const std::string& name, const SystemParams& params,
                                           double lj_cutoff);

}  // namespace gcdhmc
