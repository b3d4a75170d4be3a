#include "hogmt/precode.hpp"

#include <Eigen/LU>
#include <cmath>

#include "hogmt/error.hpp"

namespace hogmt {

namespace {

struct VecResult {
  Eigen::VectorXcd x;
  Eigen::VectorXcd coefficients;
  int kept_modes = 0;
  double predicted_residual = 0.0;
};

// Mode-space inversion on flat vectors; the frame wrappers add shape
// checks and the power policy. Works on block views of the system, so a
// precomputed decomposition can be reused across many frames for free.
VecResult precode_vec(const EigenSystem& system, const Eigen::VectorXcd& s,
                      const PrecoderConfig& config) {
  if (config.sigma_floor_rel < 0.0) {
    fail("bad_policy", "sigma_floor_rel must be >= 0");
  }
  const int by_policy = truncation_count(system.sigmas, config.truncation);
  const double sigma_1 = system.modes() > 0 ? system.sigmas(0) : 0.0;
  const double floor = config.sigma_floor_rel * sigma_1;

  int kept = 0;
  while (kept < by_policy && system.sigmas(kept) > floor) {
    ++kept;
  }
  if (kept < by_policy && config.sigma_floor_rel == 0.0) {
    // Only reachable with the floor disabled: truncation kept a mode that
    // cannot be divided by. Refuse rather than emit infinities.
    fail("singular_mode",
         "mode " + std::to_string(kept) + " has sigma " +
             std::to_string(system.sigmas(kept)) +
             " and the inversion floor is disabled");
  }
  if (kept == 0) {
    fail("rank_zero_kernel",
         "no kernel mode above the inversion floor " + std::to_string(floor));
  }

  auto psi = system.psi.leftCols(kept);
  auto phi = system.phi.leftCols(kept);
  // Expansion of the target on the output eigenfunctions, one division
  // per mode: x_n = <s, psi_n> / sigma_n.
  Eigen::VectorXcd projections = psi.adjoint() * s;
  VecResult out;
  out.coefficients.resize(kept);
  for (int n = 0; n < kept; ++n) {
    out.coefficients(n) = projections(n) / system.sigmas(n);
  }
  out.x = phi * out.coefficients;
  out.kept_modes = kept;
  out.predicted_residual = (s - psi * projections).norm();
  return out;
}

PrecodeResult finish(const GridShape& in_shape, VecResult vec,
                     const PrecoderConfig& config) {
  PrecodeResult result;
  result.coefficients = std::move(vec.coefficients);
  result.kept_modes = vec.kept_modes;
  result.predicted_residual = vec.predicted_residual;
  result.power_scale = 1.0;
  if (config.power == PowerPolicy::normalize) {
    if (!(config.power_target > 0.0)) {
      fail("bad_policy", "power_target must be > 0 under normalize");
    }
    const double raw_power = vec.x.squaredNorm();
    if (raw_power <= 0.0) {
      fail("zero_frame_power",
           "cannot normalize an all-zero transmit frame");
    }
    result.power_scale = std::sqrt(config.power_target / raw_power);
    vec.x *= result.power_scale;
  }
  result.x = SymbolFrame{in_shape, std::move(vec.x)};
  return result;
}

}  // namespace

PrecodeResult precode_with(const EigenSystem& system, const SymbolFrame& s,
                           const PrecoderConfig& config) {
  if (s.shape != system.out_shape) {
    fail("shape_mismatch", "target frame " + s.shape.str() +
                               " does not match kernel output grid " +
                               system.out_shape.str());
  }
  return finish(system.in_shape, precode_vec(system, s.data, config), config);
}

PrecodeResult precode_st(const ChannelKernel& kernel, const SymbolFrame& s,
                         const PrecoderConfig& config) {
  return precode_with(decompose_4d(kernel), s, config);
}

PrecodeResult precode_spatial(const Eigen::MatrixXcd& spatial_kernel,
                              const Eigen::VectorXcd& s,
                              const PrecoderConfig& config) {
  if (spatial_kernel.rows() != s.size()) {
    fail("shape_mismatch", "spatial kernel has " +
                               std::to_string(spatial_kernel.rows()) +
                               " outputs but the target has " +
                               std::to_string(s.size()));
  }
  EigenSystem system = decompose_2d(spatial_kernel);
  return finish(system.in_shape, precode_vec(system, s, config), config);
}

Eigen::VectorXcd solve_projection_coefficients(
    const ChannelKernel& kernel, const SymbolFrame& s,
    const std::vector<SymbolFrame>& basis, ProjectionMethod method,
    const GaussSeidelOptions& options) {
  if (s.shape != kernel.out_shape) {
    fail("shape_mismatch", "target frame " + s.shape.str() +
                               " does not match kernel output grid " +
                               kernel.out_shape.str());
  }
  if (basis.empty()) {
    fail("shape_mismatch", "empty projection dictionary");
  }
  const Eigen::Index n_basis = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd mapped(kernel.data.rows(), n_basis);
  for (Eigen::Index n = 0; n < n_basis; ++n) {
    const SymbolFrame& b = basis[static_cast<std::size_t>(n)];
    if (b.shape != kernel.in_shape) {
      fail("shape_mismatch", "dictionary frame " + std::to_string(n) +
                                 " is " + b.shape.str() +
                                 " but the kernel input grid is " +
                                 kernel.in_shape.str());
    }
    mapped.col(n) = kernel.data * b.data;
  }

  // Normal equations of min || s - mapped x ||: G x = rhs with
  // G = mapped^H mapped (Hermitian PSD) and rhs = mapped^H s.
  const Eigen::MatrixXcd gram = mapped.adjoint() * mapped;
  const Eigen::VectorXcd rhs = mapped.adjoint() * s.data;

  if (method == ProjectionMethod::gram_solve) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible()) {
      fail("singular_gram",
           "mapped dictionary is linearly dependent (Gram rank " +
               std::to_string(lu.rank()) + " of " +
               std::to_string(n_basis) + ")");
    }
    return lu.solve(rhs);
  }

  for (Eigen::Index n = 0; n < n_basis; ++n) {
    if (gram(n, n).real() <= 0.0) {
      fail("zero_projection", "dictionary frame " + std::to_string(n) +
                                  " maps to zero through the kernel");
    }
  }
  const double rhs_norm = std::max(rhs.norm(), 1e-300);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n_basis);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    // One in-place sweep: each coordinate is set to the exact minimizer
    // given the current values of all the others.
    for (Eigen::Index n = 0; n < n_basis; ++n) {
      std::complex<double> coupling = (gram.row(n) * x).value();
      coupling -= gram(n, n) * x(n);
      x(n) = (rhs(n) - coupling) / gram(n, n).real();
    }
    if ((gram * x - rhs).norm() / rhs_norm <= options.tol) {
      return x;
    }
  }
  fail("no_convergence",
       "coordinate sweeps did not reach tol " + std::to_string(options.tol) +
           " in " + std::to_string(options.max_iters) + " iterations");
}

}  // namespace hogmt
