#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "hogmt/grid.hpp"
#include "hogmt/kernel.hpp"

namespace hogmt {

// ---------------------------------------------------------------------------
// Stationary (time-invariant) multi-user FIR channel:
//   K[(u,t),(u',t')] = taps[t - t'][u, u']   for 0 <= t - t' < taps.size()
// and zero elsewhere. The kernel depends on t - t' only, which is what the
// stationarity metric in characterize.hpp detects.
struct StationarySpec {
  GridShape shape;
  std::vector<Eigen::MatrixXcd> taps;  // tap delay -> (Nu x Nu) mixing matrix
};

// Random spec: num_taps mixing matrices with complex normal entries, tap
// power decaying as 2^-delay, all drawn from the seed.
StationarySpec random_stationary_spec(GridShape shape, int num_taps,
                                      std::uint64_t seed);

ChannelKernel gen_stationary(const StationarySpec& spec);

// ---------------------------------------------------------------------------
// Non-stationary channel: a sum of taps whose gain and integer delay follow
// explicit per-time trajectories,
//   K[(u,t),(u',t')] += gain[t] * mixing[u,u']   when t' == t - delay[t].
// A negative delay would make the kernel non-causal and is rejected; a
// delay larger than t simply contributes nothing at that time (the tap's
// echo would originate before the frame started).
struct NsTap {
  std::vector<int> delay;                  // length T
  std::vector<std::complex<double>> gain;  // length T
  Eigen::MatrixXcd mixing;                 // Nu x Nu
};

struct NsChannelSpec {
  GridShape shape;
  std::vector<NsTap> taps;
};

// Parametric trajectory builder: delay(t) = round(base_delay +
// delay_drift * t), gain(t) = gain * (1 + gain_drift * t) * e^(2 pi i
// doppler * t), mixing = diag part plus leakage * W where W is a random
// unit-normalized off-diagonal mixing matrix drawn from the seed.
struct DriftingTap {
  double base_delay = 0.0;
  double delay_drift = 0.0;   // samples per time step
  double doppler = 0.0;       // cycles per time step
  std::complex<double> gain = 1.0;
  double gain_drift = 0.0;    // relative amplitude slope per time step
  double leakage = 0.0;       // cross-user mixing strength, >= 0
};

NsChannelSpec make_drifting_spec(GridShape shape,
                                 const std::vector<DriftingTap>& taps,
                                 std::uint64_t seed);

// Stationary counterpart that holds every trajectory at its t = 0 value.
// With constant trajectories, gen_nonstationary(spec) ==
// gen_stationary(freeze_at_start(spec)) entry for entry.
StationarySpec freeze_at_start(const NsChannelSpec& spec);

ChannelKernel gen_nonstationary(const NsChannelSpec& spec);

// ---------------------------------------------------------------------------
// Dense square random kernel (out == in == shape) with i.i.d. complex
// normal entries. With condition_target set (>= 1), the singular values
// are rescaled log-uniformly so the condition number lands on the target
// exactly; shapes with one grid point only admit target 1.
ChannelKernel gen_random(GridShape shape, std::uint64_t seed,
                         std::optional<double> condition_target = {});

}  // namespace hogmt
