#include "hogmt/decompose.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "hogmt/error.hpp"

namespace hogmt {

TruncationPolicy TruncationPolicy::keep_all() { return {}; }

TruncationPolicy TruncationPolicy::energy_threshold(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    fail("bad_policy", "energy threshold must lie in (0, 1), got " +
                           std::to_string(eps));
  }
  TruncationPolicy p;
  p.mode = Mode::energy_threshold;
  p.epsilon = eps;
  return p;
}

TruncationPolicy TruncationPolicy::max_modes_of(int n) {
  if (n < 0) {
    fail("bad_policy", "mode cap must be >= 0, got " + std::to_string(n));
  }
  TruncationPolicy p;
  p.mode = Mode::max_modes;
  p.max_modes = n;
  return p;
}

TruncationPolicy TruncationPolicy::sigma_floor_of(double delta) {
  if (!(delta > 0.0)) {
    fail("bad_policy",
         "sigma floor must be > 0, got " + std::to_string(delta));
  }
  TruncationPolicy p;
  p.mode = Mode::sigma_floor;
  p.floor = delta;
  return p;
}

namespace {

// Rotate each mode's global phase so the largest-magnitude entry of the
// phi column is real and positive; psi gets the same rotation, which keeps
// every product sigma_n * psi_n * phi_n^H (and hence the kernel) intact.
// Ties break to the lowest flat index, making the gauge deterministic.
void fix_gauge(Eigen::MatrixXcd& psi, Eigen::MatrixXcd& phi) {
  for (Eigen::Index n = 0; n < phi.cols(); ++n) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index m = 0; m < phi.rows(); ++m) {
      double mag = std::abs(phi(m, n));
      if (mag > best) {
        best = mag;
        pivot = m;
      }
    }
    if (best <= 0.0) {
      continue;  // zero column; nothing to rotate
    }
    std::complex<double> rot = std::conj(phi(pivot, n)) / best;
    phi.col(n) *= rot;
    psi.col(n) *= rot;
  }
}

}  // namespace

int truncation_count(const Eigen::VectorXd& sigmas,
                     const TruncationPolicy& p) {
  const int modes = static_cast<int>(sigmas.size());
  switch (p.mode) {
    case TruncationPolicy::Mode::keep_all:
      return modes;
    case TruncationPolicy::Mode::max_modes:
      return std::min(modes, p.max_modes);
    case TruncationPolicy::Mode::sigma_floor: {
      int kept = 0;
      while (kept < modes && sigmas(kept) > p.floor) {
        ++kept;
      }
      return kept;
    }
    case TruncationPolicy::Mode::energy_threshold: {
      const double total = sigmas.squaredNorm();
      if (total <= 0.0) {
        return 0;
      }
      double acc = 0.0;
      int kept = 0;
      while (kept < modes && acc < (1.0 - p.epsilon) * total) {
        acc += sigmas(kept) * sigmas(kept);
        ++kept;
      }
      return kept;
    }
  }
  fail("bad_policy", "unknown truncation mode");
}

EigenSystem decompose_2d(const Eigen::MatrixXcd& kernel,
                         const TruncationPolicy& policy) {
  if (kernel.rows() < 1 || kernel.cols() < 1) {
    fail("shape_mismatch", "cannot decompose an empty kernel");
  }
  if (!kernel.allFinite()) {
    fail("non_finite", "kernel contains non-finite entries");
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(
      kernel, Eigen::ComputeThinU | Eigen::ComputeThinV);
  EigenSystem system;
  system.sigmas = svd.singularValues();
  system.psi = svd.matrixU();
  system.phi = svd.matrixV();
  fix_gauge(system.psi, system.phi);
  system.out_shape = make_grid(static_cast<int>(kernel.rows()), 1);
  system.in_shape = make_grid(static_cast<int>(kernel.cols()), 1);
  system.source_norm = kernel.norm();
  return truncate(system, policy);
}

EigenSystem decompose_4d(const ChannelKernel& kernel,
                         const TruncationPolicy& policy) {
  EigenSystem system = decompose_2d(kernel.data, policy);
  system.out_shape = kernel.out_shape;
  system.in_shape = kernel.in_shape;
  return system;
}

EigenSystem truncate(const EigenSystem& system,
                     const TruncationPolicy& policy) {
  const int kept = truncation_count(system.sigmas, policy);
  if (kept == system.modes()) {
    return system;
  }
  EigenSystem out;
  out.sigmas = system.sigmas.head(kept);
  out.psi = system.psi.leftCols(kept);
  out.phi = system.phi.leftCols(kept);
  out.out_shape = system.out_shape;
  out.in_shape = system.in_shape;
  out.source_norm = system.source_norm;
  return out;
}

ChannelKernel reconstruct(const EigenSystem& system) {
  const int rows = system.out_shape.size();
  const int cols = system.in_shape.size();
  if (system.psi.rows() != rows || system.phi.rows() != cols) {
    fail("shape_mismatch", "eigensystem factors do not match its grids");
  }
  if (system.modes() == 0) {
    return make_kernel(system.out_shape, system.in_shape,
                       Eigen::MatrixXcd::Zero(rows, cols));
  }
  Eigen::MatrixXcd data =
      system.psi * system.sigmas.asDiagonal() * system.phi.adjoint();
  return make_kernel(system.out_shape, system.in_shape, std::move(data));
}

double channel_eigen_identity_check(const ChannelKernel& kernel,
                                    const EigenSystem& system, int n,
                                    double floor_rel) {
  if (n < 0 || n >= system.modes()) {
    fail("index_range", "mode " + std::to_string(n) + " outside [0, " +
                            std::to_string(system.modes()) + ")");
  }
  if (kernel.data.rows() != system.psi.rows() ||
      kernel.data.cols() != system.phi.rows()) {
    fail("shape_mismatch", "eigensystem does not belong to this kernel");
  }
  const double sigma_1 = system.modes() > 0 ? system.sigmas(0) : 0.0;
  const double defect =
      (kernel.data * system.phi.col(n) - system.sigmas(n) * system.psi.col(n))
          .norm();
  const double denom = std::max(system.sigmas(n), floor_rel * sigma_1);
  if (denom <= 0.0) {
    return defect == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return defect / denom;
}

Eigen::MatrixXcd mode_grid(const Eigen::MatrixXcd& columns, int n,
                           const GridShape& shape) {
  if (n < 0 || n >= columns.cols()) {
    fail("index_range", "column " + std::to_string(n) + " outside [0, " +
                            std::to_string(columns.cols()) + ")");
  }
  if (columns.rows() != shape.size()) {
    fail("shape_mismatch", "column length " + std::to_string(columns.rows()) +
                               " does not fill grid " + shape.str());
  }
  Eigen::MatrixXcd grid(shape.num_users, shape.num_times);
  for (int u = 0; u < shape.num_users; ++u) {
    for (int t = 0; t < shape.num_times; ++t) {
      grid(u, t) = columns(flatten(u, t, shape), n);
    }
  }
  return grid;
}

}  // namespace hogmt
