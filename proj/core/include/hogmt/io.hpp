#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "hogmt/frame.hpp"
#include "hogmt/kernel.hpp"

namespace hogmt {

// ---------------------------------------------------------------------------
// HGMT v1: binary kernel container. Little-endian throughout:
//   bytes 0..3   magic "HGMT"
//   u32          version (1)
//   u32 x 4      num_users_out, num_times_out, num_users_in, num_times_in
//   f64 x 2 * N  interleaved (re, im), row-major over (out index, in index)
// Loading rejects wrong magic ("bad_magic"), unknown version
// ("bad_version"), dimension products that overflow a sane size
// ("dim_overflow") and short payloads ("truncated_file"). Writing and
// re-loading reproduces the kernel bit for bit.
void save_kernel(const ChannelKernel& kernel,
                 const std::filesystem::path& path);
ChannelKernel load_kernel(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Frame CSV: header "u,t,re,im", one row per grid point in flat order.
// Doubles are written with shortest round-trip formatting, so load(save(f))
// is exact. Loading validates the header, per-row parses, and that rows
// cover the grid exactly once in order.
void save_frame_csv(const SymbolFrame& frame,
                    const std::filesystem::path& path);
SymbolFrame load_frame_csv(const std::filesystem::path& path);

// Singular value CSV: header "n,sigma", one row per mode.
void save_sigma_csv(const Eigen::VectorXd& sigmas,
                    const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Shortest round-trip decimal formatting (never locale dependent); the
// same representation everywhere is what makes text outputs byte-stable.
std::string format_double(double v);
double parse_double(std::string_view s);  // Error("bad_number")
long long parse_int(std::string_view s);  // Error("bad_number")

// FNV-1a over bytes; used to fingerprint configuration files in reports.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     std::string_view content);

}  // namespace hogmt
