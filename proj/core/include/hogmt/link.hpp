#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hogmt/frame.hpp"
#include "hogmt/kernel.hpp"
#include "hogmt/modulation.hpp"
#include "hogmt/precode.hpp"
#include "hogmt/rng.hpp"

namespace hogmt {

enum class Precoding {
  none,             // transmit symbols directly
  spatial,          // per-time-slice inversion of the same-time kernel
  spatio_temporal,  // joint eigenmode precoding of the full kernel
};

Precoding parse_precoding(const std::string& name);  // Error("bad_precoding")
std::string precoding_name(Precoding p);

struct LinkConfig {
  ChannelKernel kernel;  // must be square (out_shape == in_shape)
  ModScheme scheme = ModScheme::qpsk;
  std::vector<double> snr_db_points;  // +inf means noise-free
  int trials_per_point = 1;           // frames per SNR point
  Precoding precoding = Precoding::none;
  PrecoderConfig precoder;            // used by the precoded modes
  std::uint64_t seed = 0;
  int threads = 1;                    // never affects results, only speed
  std::string config_digest;          // echoed into reports, may be empty
};

struct LinkPoint {
  double snr_db = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_sent = 0;
  double ber = 0.0;
  double mean_residual = 0.0;  // ||r0/scale - s|| / ||s||, noise-free part
  double max_residual = 0.0;
  int kept_modes = 0;
  double mean_tx_power = 0.0;  // ||x||^2 averaged over trials
};

struct LinkReport {
  std::vector<LinkPoint> points;
  std::uint64_t seed = 0;
  std::string config_digest;
};

// Adds circularly-symmetric complex Gaussian noise of per-sample variance
// 10^(-snr_db / 10); snr_db = +inf passes the frame through untouched.
SymbolFrame awgn(const SymbolFrame& x, double snr_db, SplitMix64& rng);

// Monte-Carlo bit error rate measurement. Every trial derives its own
// random stream from (seed, point index, trial index), and floating-point
// accumulation happens in fixed trial order after the parallel phase, so
// reports are identical for any thread count.
LinkReport run_link(const LinkConfig& config);

void write_ber_csv(const LinkReport& report, const std::filesystem::path& path);
void write_ber_summary_json(const LinkReport& report,
                            const std::filesystem::path& path);

// Sorts the SNR points ascending, runs the link, writes "<stem>.csv" and
// the "<stem>_summary.json" sidecar, and returns the report.
LinkReport ber_sweep(const LinkConfig& config,
                     const std::filesystem::path& csv_path);

}  // namespace hogmt
