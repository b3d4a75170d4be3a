#pragma once

#include <complex>
#include <cstdint>

namespace hogmt {

// Fixed 64-bit avalanche mix (the SplitMix64 finalizer). Used both as the
// generator step and to derive independent substream seeds from
// (seed, index...) tuples, so results never depend on call order between
// streams -- that is what makes the simulator thread-count invariant.
std::uint64_t mix64(std::uint64_t x);

// SplitMix64: tiny, fast, and with a portable, exactly-specified output
// sequence. All randomness in the library flows through this so that a
// (seed, shape) pair pins every generated byte on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, 1), 53-bit resolution.
  double next_double();

  // Standard normal via Box-Muller; generates pairs and caches the spare.
  double next_gaussian();

  // Circularly-symmetric complex normal with E|z|^2 = 1. Always consumes
  // exactly one Box-Muller pair (never the cached spare), so complex draws
  // stay aligned regardless of interleaved scalar draws.
  std::complex<double> next_complex_gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream for a keyed sub-task, e.g. (seed, snr point, trial).
SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace hogmt
