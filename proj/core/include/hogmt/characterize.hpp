#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "hogmt/kernel.hpp"

namespace hogmt {

// Time-correlation of a square kernel, aggregated over users:
//   R[t, t''] = sum_u sum_{u',t'} K[(u,t),(u',t')] conj(K[(u,t''),(u',t')]).
// R is Hermitian positive semi-definite. For a time-invariant kernel the
// steady-state part of R depends only on t - t''.
Eigen::MatrixXcd time_correlation(const ChannelKernel& kernel);

struct StationarityReport {
  double eta = 0.0;  // relative distance of R from its closest-mean
                     // Toeplitz matrix: ||R - T||_F / ||R||_F
  int guard = 0;     // leading samples excluded before measuring eta
  Eigen::VectorXd energy_profile;  // diag(R): received energy per time slot
  int dominant_modes_99 = 0;       // eigenmodes of R holding 99% energy
};

// Measures eta on R[guard:, guard:] (per-diagonal-mean Toeplitz fit). The
// energy profile and mode count always cover the full matrix. guard = 0
// applies the metric verbatim. Error("degenerate_correlation") if the
// guarded block is empty or identically zero.
StationarityReport stationarity_metric(const Eigen::MatrixXcd& correlation,
                                       int guard = 0);

// Largest t - t' over nonzero kernel entries: the delay spread. A causal
// FIR kernel fills R's steady state only after this many samples.
int kernel_delay_spread(const ChannelKernel& kernel);

// Convenience wrapper: computes R and measures eta behind a startup guard
// inferred from the kernel's delay spread (capped at half the window), so
// a time-invariant FIR channel scores eta = 0 up to rounding instead of
// being penalized for the first partially-filled samples.
StationarityReport stationarity_report(const ChannelKernel& kernel);

// Writes |K[(u,t),(u',t')]| over (u', t') as one CSV matrix per requested
// output time ("slice_u<u>_t<t>.csv", rows u', columns t') plus a gnuplot
// script "slices.gp" rendering them as heat maps. Returns written paths.
std::vector<std::filesystem::path> export_kernel_slices(
    const ChannelKernel& kernel, int u, const std::vector<int>& times,
    const std::filesystem::path& out_dir);

}  // namespace hogmt
