#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hogmt/channel.hpp"
#include "hogmt/link.hpp"
#include "hogmt/toml.hpp"

namespace hogmt {

// Declarative kernel description, as found in a gen spec file or inline
// under [kernel] in a link config.
struct KernelSpecConfig {
  enum class Kind { identity, random, stationary, nonstationary };
  Kind kind = Kind::identity;
  GridShape shape;
  std::uint64_t seed = 0;
  std::optional<double> condition_target;  // kind == random
  int num_taps = 1;                        // kind == stationary
  std::vector<DriftingTap> taps;           // kind == nonstationary
};

// Reads keys under `prefix` ("" at top level, "kernel." when nested):
//   kind = "identity" | "random" | "stationary" | "nonstationary"
//   seed = <int>                       (optional, default 0)
//   [<prefix>grid]  num_users, num_times
//   [<prefix>random]    condition_target   (optional)
//   [<prefix>stationary] num_taps
//   [[<prefix>tap]]     base_delay, delay_drift, doppler, gain | gain = [re, im],
//                       gain_drift, leakage       (one block per tap)
// Unknown or missing fields raise config errors naming key and line.
KernelSpecConfig parse_kernel_spec(const toml::Document& doc,
                                   const std::string& prefix);

ChannelKernel build_kernel(const KernelSpecConfig& spec);

// Link config file:
//   scheme = "bpsk" | "qpsk" | "qam16" | "qam64"
//   snr_db = [4.0, 6.0, inf]
//   trials = <int>
//   precoding = "none" | "spatial" | "spatio_temporal"
//   seed = <int>                       (optional; the CLI flag overrides)
//   [kernel]   file = "path.hgmt"  -- or an inline kernel spec as above
//   [precoder] truncation = "keep_all" | "energy" | "max_modes" | "sigma_floor"
//              epsilon / max_modes / sigma_floor  (per truncation mode)
//              sigma_floor_rel = <float>          (default 1e-12)
//              power = "none" | "normalize"
//              power_target = <float>  (0 or absent: the frame size, i.e.
//                                       unit average power per sample)
// Relative kernel file paths resolve against the config file's directory.
LinkConfig parse_link_config(const std::filesystem::path& path);

// Fingerprint reports carry: FNV-1a over the config bytes mixed with the
// effective seed. Thread count deliberately stays out of it.
std::string config_digest(std::string_view config_bytes, std::uint64_t seed);

}  // namespace hogmt
