#include "hogmt/modulation.hpp"

#include <cmath>
#include <limits>

#include "hogmt/error.hpp"

namespace hogmt {

int bits_per_symbol(ModScheme scheme) {
  switch (scheme) {
    case ModScheme::bpsk:
      return 1;
    case ModScheme::qpsk:
      return 2;
    case ModScheme::qam16:
      return 4;
    case ModScheme::qam64:
      return 6;
  }
  fail("bad_scheme", "unknown modulation scheme");
}

std::string scheme_name(ModScheme scheme) {
  switch (scheme) {
    case ModScheme::bpsk:
      return "bpsk";
    case ModScheme::qpsk:
      return "qpsk";
    case ModScheme::qam16:
      return "qam16";
    case ModScheme::qam64:
      return "qam64";
  }
  fail("bad_scheme", "unknown modulation scheme");
}

ModScheme parse_scheme(const std::string& name) {
  if (name == "bpsk") return ModScheme::bpsk;
  if (name == "qpsk") return ModScheme::qpsk;
  if (name == "qam16") return ModScheme::qam16;
  if (name == "qam64") return ModScheme::qam64;
  fail("bad_scheme", "unknown modulation scheme '" + name + "'");
}

namespace {

// Reflected-Gray decode: index of bit pattern v along one amplitude axis.
unsigned gray_decode(unsigned v) {
  for (unsigned shift = 1; shift < 16; shift <<= 1) {
    v ^= v >> shift;
  }
  return v;
}

// Average symbol energy of the (2^k)-level PAM grid {±1, ±3, ...} is
// (4^k - 1) / 3 per axis; the table divides by sqrt of the two-axis sum
// so every constellation has unit average energy.
double axis_scale(int bits_per_axis) {
  double levels = std::ldexp(1.0, bits_per_axis);  // 2^k
  return std::sqrt(2.0 * (levels * levels - 1.0) / 3.0);
}

std::vector<std::complex<double>> build_table(ModScheme scheme) {
  const int bps = bits_per_symbol(scheme);
  const unsigned count = 1u << bps;
  std::vector<std::complex<double>> table(count);
  if (scheme == ModScheme::bpsk) {
    table[0] = {1.0, 0.0};
    table[1] = {-1.0, 0.0};
    return table;
  }
  const int k = bps / 2;  // bits per axis
  const unsigned axis = 1u << k;
  const double scale = axis_scale(k);
  for (unsigned v = 0; v < count; ++v) {
    unsigned vi = v >> k;          // high bits: in-phase
    unsigned vq = v & (axis - 1);  // low bits: quadrature
    double level_i = (axis - 1.0) - 2.0 * gray_decode(vi);
    double level_q = (axis - 1.0) - 2.0 * gray_decode(vq);
    table[v] = {level_i / scale, level_q / scale};
  }
  return table;
}

}  // namespace

const std::vector<std::complex<double>>& constellation(ModScheme scheme) {
  static const std::vector<std::complex<double>> bpsk =
      build_table(ModScheme::bpsk);
  static const std::vector<std::complex<double>> qpsk =
      build_table(ModScheme::qpsk);
  static const std::vector<std::complex<double>> qam16 =
      build_table(ModScheme::qam16);
  static const std::vector<std::complex<double>> qam64 =
      build_table(ModScheme::qam64);
  switch (scheme) {
    case ModScheme::bpsk:
      return bpsk;
    case ModScheme::qpsk:
      return qpsk;
    case ModScheme::qam16:
      return qam16;
    case ModScheme::qam64:
      return qam64;
  }
  fail("bad_scheme", "unknown modulation scheme");
}

std::complex<double> map_symbol(unsigned value, ModScheme scheme) {
  const auto& table = constellation(scheme);
  if (value >= table.size()) {
    fail("index_range", "symbol value " + std::to_string(value) +
                            " outside [0, " + std::to_string(table.size()) +
                            ")");
  }
  return table[value];
}

unsigned slice_symbol(std::complex<double> r, ModScheme scheme) {
  const auto& table = constellation(scheme);
  unsigned best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned v = 0; v < table.size(); ++v) {
    double d = std::norm(r - table[v]);
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

SymbolFrame modulate(const BitVec& bits, ModScheme scheme, GridShape shape) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  const int bps = bits_per_symbol(scheme);
  const std::size_t need =
      static_cast<std::size_t>(checked.size()) * static_cast<std::size_t>(bps);
  if (bits.size() != need) {
    fail("shape_mismatch", "got " + std::to_string(bits.size()) +
                               " bits, grid " + checked.str() + " with " +
                               scheme_name(scheme) + " needs " +
                               std::to_string(need));
  }
  Eigen::VectorXcd data(checked.size());
  for (int m = 0; m < checked.size(); ++m) {
    unsigned value = 0;
    for (int b = 0; b < bps; ++b) {
      std::uint8_t bit = bits[static_cast<std::size_t>(m) *
                                  static_cast<std::size_t>(bps) +
                              static_cast<std::size_t>(b)];
      if (bit > 1) {
        fail("index_range", "bit values must be 0 or 1");
      }
      value = (value << 1) | bit;  // MSB first
    }
    data(m) = map_symbol(value, scheme);
  }
  return SymbolFrame{checked, std::move(data)};
}

BitVec demodulate(const SymbolFrame& frame, ModScheme scheme) {
  const int bps = bits_per_symbol(scheme);
  BitVec bits(static_cast<std::size_t>(frame.shape.size()) *
              static_cast<std::size_t>(bps));
  for (int m = 0; m < frame.shape.size(); ++m) {
    unsigned value = slice_symbol(frame.data(m), scheme);
    for (int b = 0; b < bps; ++b) {
      bits[static_cast<std::size_t>(m) * static_cast<std::size_t>(bps) +
           static_cast<std::size_t>(b)] =
          static_cast<std::uint8_t>((value >> (bps - 1 - b)) & 1u);
    }
  }
  return bits;
}

}  // namespace hogmt
