#pragma once

#include <Eigen/Dense>

#include "hogmt/grid.hpp"
#include "hogmt/kernel.hpp"

namespace hogmt {

// How many eigenmodes to keep after a decomposition.
struct TruncationPolicy {
  enum class Mode { keep_all, energy_threshold, max_modes, sigma_floor };

  Mode mode = Mode::keep_all;
  double epsilon = 0.0;    // energy_threshold: allowed energy fraction lost
  int max_modes = 0;       // max_modes: cap on kept modes
  double floor = 0.0;      // sigma_floor: absolute singular value cutoff

  static TruncationPolicy keep_all();
  // eps in (0, 1): keep the smallest prefix of modes whose energy
  // sum_kept sigma_n^2 reaches (1 - eps) of the total.
  static TruncationPolicy energy_threshold(double eps);
  // n >= 0: keep at most the n strongest modes (0 drops everything).
  static TruncationPolicy max_modes_of(int n);
  // delta > 0: drop every mode with sigma_n <= delta.
  static TruncationPolicy sigma_floor_of(double delta);
};

// Jointly orthonormal eigensystem of a channel kernel: the kernel acts on
// the stored input-side columns as
//
//   apply_kernel(K, phi.col(n)) = sigmas[n] * psi.col(n)      (exact)
//
// equivalently K = psi * diag(sigmas) * phi^H over the kept modes. Note
// the convention: phi stores the column that the kernel maps through
// directly; the expansion coefficient basis function on the input side is
// its elementwise conjugate. Both factors have orthonormal columns.
//
// The phase gauge is fixed per mode: the largest-magnitude entry of each
// phi column is real and positive (ties broken by lowest flat index), so
// identical inputs give bit-identical systems run to run.
struct EigenSystem {
  Eigen::VectorXd sigmas;  // descending, >= 0
  Eigen::MatrixXcd psi;    // output-side eigenfunctions, one per column
  Eigen::MatrixXcd phi;    // input-side factors, one per column (see above)
  GridShape out_shape;
  GridShape in_shape;
  double source_norm = 0.0;  // Frobenius norm of the decomposed kernel

  int modes() const { return static_cast<int>(sigmas.size()); }
};

// Decompose a raw unfolded matrix; the grids default to (rows x 1) out and
// (cols x 1) in. Throws Error("non_finite") on bad input.
EigenSystem decompose_2d(
    const Eigen::MatrixXcd& kernel,
    const TruncationPolicy& policy = TruncationPolicy::keep_all());

// Decompose a four-index kernel by unfolding over its grids.
EigenSystem decompose_4d(
    const ChannelKernel& kernel,
    const TruncationPolicy& policy = TruncationPolicy::keep_all());

// Number of leading modes a policy keeps for a descending sigma vector.
int truncation_count(const Eigen::VectorXd& sigmas,
                     const TruncationPolicy& policy);

// Apply a (possibly tighter) truncation to an existing system.
EigenSystem truncate(const EigenSystem& system, const TruncationPolicy& policy);

// K_hat = sum_n sigmas[n] * psi.col(n) * phi.col(n)^H, reshaped to grids.
ChannelKernel reconstruct(const EigenSystem& system);

// Relative defect of the mode-n mapping identity:
// ||K phi_n - sigma_n psi_n|| / max(sigma_n, floor_rel * sigma_1).
double channel_eigen_identity_check(const ChannelKernel& kernel,
                                    const EigenSystem& system, int n,
                                    double floor_rel = 1e-12);

// Column n of an eigenfunction matrix viewed on its grid: entry (u, t).
Eigen::MatrixXcd mode_grid(const Eigen::MatrixXcd& columns, int n,
                           const GridShape& shape);

}  // namespace hogmt
