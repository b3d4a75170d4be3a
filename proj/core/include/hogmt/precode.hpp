#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hogmt/decompose.hpp"
#include "hogmt/frame.hpp"
#include "hogmt/kernel.hpp"

namespace hogmt {

enum class PowerPolicy {
  none,       // transmit the raw minimum-norm solution
  normalize,  // rescale so ||x||^2 == power_target exactly
};

struct PrecoderConfig {
  TruncationPolicy truncation;      // applied to the eigensystem first
  double sigma_floor_rel = 1e-12;   // inversion floor, relative to sigma_1:
                                    // modes with sigma_n <= rel * sigma_1
                                    // are never inverted
  PowerPolicy power = PowerPolicy::none;
  double power_target = 0.0;        // required > 0 under normalize
};

struct PrecodeResult {
  SymbolFrame x;                    // transmit frame (power policy applied)
  Eigen::VectorXcd coefficients;    // per kept mode: <s, psi_n> / sigma_n
  int kept_modes = 0;
  // || s - proj s || where proj is the orthogonal projection onto the
  // span of the kept psi columns: the interference-free part of s that
  // the channel cannot be made to reproduce is exactly what is left over.
  double predicted_residual = 0.0;
  double power_scale = 1.0;         // x = power_scale * raw solution
};

// Zero-interference spatio-temporal precoder. Expands the target frame on
// the kernel's output eigenfunctions and pre-inverts each kept mode, so
// applying the kernel to x returns s exactly (up to the predicted
// residual when modes were dropped). Equals the minimum-norm least-squares
// solution of K x = s over the kept modes.
//
// Throws Error("rank_zero_kernel") when every mode falls below the
// inversion floor, Error("singular_mode") when truncation keeps a mode the
// floor refuses to invert (possible only with sigma_floor_rel = 0).
PrecodeResult precode_st(const ChannelKernel& kernel, const SymbolFrame& s,
                         const PrecoderConfig& config);

// Same, reusing an already-computed eigensystem of the kernel.
PrecodeResult precode_with(const EigenSystem& system, const SymbolFrame& s,
                           const PrecoderConfig& config);

// Spatial-only variant: precodes one time slice through its (Nu x Nu)
// same-time kernel. Baseline for comparisons against the joint precoder.
PrecodeResult precode_spatial(const Eigen::MatrixXcd& spatial_kernel,
                              const Eigen::VectorXcd& s,
                              const PrecoderConfig& config);

enum class ProjectionMethod {
  gram_solve,    // direct solve of the normal equations (Gram system)
  gauss_seidel,  // coordinate sweeps on the same fixed point
};

struct GaussSeidelOptions {
  int max_iters = 1000;
  double tol = 1e-12;  // relative residual ||G x - b|| / ||b||
};

// General projection-coefficient solver for an arbitrary finite dictionary
// of input frames: finds x minimizing || s - sum_n x_n * K basis_n ||.
// With c_n = K basis_n, the optimum solves the Gram system
//   sum_n' <c_n', c_n> x_n' = <s, c_n>.
// gram_solve factorizes it directly (Error("singular_gram") if the mapped
// dictionary is linearly dependent); gauss_seidel sweeps
//   x_n <- (<s, c_n> - sum_{n' != n} x_n' <c_n', c_n>) / <c_n, c_n>
// until the relative residual meets tol (Error("no_convergence") if the
// iteration budget runs out, Error("zero_projection") if some c_n is 0).
Eigen::VectorXcd solve_projection_coefficients(
    const ChannelKernel& kernel, const SymbolFrame& s,
    const std::vector<SymbolFrame>& basis, ProjectionMethod method,
    const GaussSeidelOptions& options = {});

}  // namespace hogmt
