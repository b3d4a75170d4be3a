#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "hogmt/frame.hpp"
#include "hogmt/grid.hpp"

namespace hogmt {

enum class ModScheme { bpsk, qpsk, qam16, qam64 };

int bits_per_symbol(ModScheme scheme);
std::string scheme_name(ModScheme scheme);
ModScheme parse_scheme(const std::string& name);  // Error("bad_scheme")

// Constellation table indexed by symbol value (bits read MSB-first).
// Square Gray-coded grids normalized to unit average symbol energy; for
// the quadrature schemes the high half of the bits selects the in-phase
// level and the low half the quadrature level, each through a reflected
// Gray code, so nearest neighbours differ in exactly one bit.
const std::vector<std::complex<double>>& constellation(ModScheme scheme);

std::complex<double> map_symbol(unsigned value, ModScheme scheme);
// Minimum-distance decision; ties resolve to the lowest symbol value.
unsigned slice_symbol(std::complex<double> r, ModScheme scheme);

using BitVec = std::vector<std::uint8_t>;  // one bit per element, 0 or 1

// bits.size() must equal shape.size() * bits_per_symbol(scheme); symbols
// fill the frame in flat grid order. Error("shape_mismatch") otherwise.
SymbolFrame modulate(const BitVec& bits, ModScheme scheme, GridShape shape);

BitVec demodulate(const SymbolFrame& frame, ModScheme scheme);

}  // namespace hogmt
