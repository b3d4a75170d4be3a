#include "hogmt/rng.hpp"

#include <cmath>
#include <numbers>

namespace hogmt {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

namespace {

// One Box-Muller pair from two uniforms. u1 is flipped into (0, 1] so the
// log never sees zero.
inline std::pair<double, double> box_muller(double u1, double u2) {
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  double angle = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace

double SplitMix64::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  auto [g1, g2] = box_muller(next_double(), next_double());
  spare_ = g2;
  has_spare_ = true;
  return g1;
}

std::complex<double> SplitMix64::next_complex_gaussian() {
  auto [g1, g2] = box_muller(next_double(), next_double());
  return {g1 * std::numbers::sqrt2 / 2.0, g2 * std::numbers::sqrt2 / 2.0};
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // Feed each component through the full avalanche before combining, so
  // nearby (seed, a, b) tuples land on unrelated states.
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ (a + 0x632be59bd9b4e019ULL));
  s = mix64(s ^ (b + 0x9e6c63d0876a9a62ULL));
  return SplitMix64(s);
}

}  // namespace hogmt
