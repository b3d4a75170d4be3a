#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <functional>

#include "hogmt/channel.hpp"
#include "hogmt/error.hpp"
#include "hogmt/io.hpp"
#include "hogmt/link.hpp"
#include "hogmt/modulation.hpp"
#include "oracles.hpp"

using namespace hogmt;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "hogmt_link_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("constellations have unit average energy") {
  for (ModScheme scheme : {ModScheme::bpsk, ModScheme::qpsk, ModScheme::qam16,
                           ModScheme::qam64}) {
    const auto& table = constellation(scheme);
    REQUIRE(table.size() == (1u << bits_per_symbol(scheme)));
    double energy = 0.0;
    for (auto c : table) {
      energy += std::norm(c);
    }
    energy /= static_cast<double>(table.size());
    INFO(scheme_name(scheme));
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("nearest constellation neighbours differ in exactly one bit") {
  for (ModScheme scheme : {ModScheme::qpsk, ModScheme::qam16,
                           ModScheme::qam64}) {
    const auto& table = constellation(scheme);
    // Find the minimum pairwise distance, then check every pair at it.
    double min_d = 1e9;
    for (unsigned a = 0; a < table.size(); ++a) {
      for (unsigned b = a + 1; b < table.size(); ++b) {
        min_d = std::min(min_d, std::abs(table[a] - table[b]));
      }
    }
    INFO(scheme_name(scheme));
    for (unsigned a = 0; a < table.size(); ++a) {
      for (unsigned b = a + 1; b < table.size(); ++b) {
        if (std::abs(table[a] - table[b]) <= min_d * 1.0001) {
          CHECK(__builtin_popcount(a ^ b) == 1);
        }
      }
    }
  }
}

TEST_CASE("fixed QPSK map: bits 00 land on the first-quadrant corner") {
  // MSB selects in-phase, LSB quadrature; 0 maps to the positive level.
  const auto& table = constellation(ModScheme::qpsk);
  const double a = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(table[0] - std::complex<double>(a, a)) <= 1e-15);
  CHECK(std::abs(table[1] - std::complex<double>(a, -a)) <= 1e-15);
  CHECK(std::abs(table[2] - std::complex<double>(-a, a)) <= 1e-15);
  CHECK(std::abs(table[3] - std::complex<double>(-a, -a)) <= 1e-15);
  // BPSK: 0 -> +1, 1 -> -1.
  CHECK(constellation(ModScheme::bpsk)[0] == std::complex<double>(1, 0));
  CHECK(constellation(ModScheme::bpsk)[1] == std::complex<double>(-1, 0));
}

TEST_CASE("modulate/demodulate round-trips every symbol value") {
  for (ModScheme scheme : {ModScheme::bpsk, ModScheme::qpsk, ModScheme::qam16,
                           ModScheme::qam64}) {
    const int bps = bits_per_symbol(scheme);
    const int count = 1 << bps;
    GridShape g = make_grid(1, count);
    BitVec bits;
    for (int v = 0; v < count; ++v) {
      for (int b = 0; b < bps; ++b) {
        bits.push_back(static_cast<std::uint8_t>((v >> (bps - 1 - b)) & 1));
      }
    }
    SymbolFrame f = modulate(bits, scheme, g);
    BitVec back = demodulate(f, scheme);
    INFO(scheme_name(scheme));
    CHECK(back == bits);
  }
}

TEST_CASE("modulate validates the bit count") {
  CHECK_THROWS_AS(modulate(BitVec{0, 1, 1}, ModScheme::qpsk, make_grid(1, 2)),
                  Error);
}

TEST_CASE("awgn: infinite SNR passes the frame through untouched") {
  GridShape g = make_grid(2, 3);
  SplitMix64 rng(7);
  Eigen::VectorXcd v(6);
  for (int i = 0; i < 6; ++i) {
    v(i) = rng.next_complex_gaussian();
  }
  SymbolFrame f = make_frame(g, v);
  SplitMix64 noise_rng(8);
  SymbolFrame out = awgn(f, std::numeric_limits<double>::infinity(),
                         noise_rng);
  CHECK((out.data - f.data).norm() == 0.0);
}

TEST_CASE("awgn: measured noise power matches the SNR setting") {
  GridShape g = make_grid(1, 20000);
  SymbolFrame zero = zero_frame(g);
  SplitMix64 rng(99);
  SymbolFrame out = awgn(zero, 7.0, rng);  // sigma^2 = 10^-0.7
  const double expect = std::pow(10.0, -0.7);
  const double measured = out.data.squaredNorm() / g.size();
  // Deterministic draw; the sample variance sits well within 5%.
  CHECK(measured == doctest::Approx(expect).epsilon(0.05));
  // Real and imaginary parts carry equal halves on average.
  double re2 = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    re2 += out.data(i).real() * out.data(i).real();
  }
  CHECK(re2 / g.size() == doctest::Approx(expect / 2).epsilon(0.1));
}

TEST_CASE("identity-channel BPSK tracks the closed-form error rate") {
  LinkConfig cfg;
  cfg.kernel = identity_kernel(make_grid(1, 256));
  cfg.scheme = ModScheme::bpsk;
  cfg.snr_db_points = {6.0};
  cfg.trials_per_point = 400;  // ~1e5 bits
  cfg.seed = 2024;
  LinkReport rep = run_link(cfg);
  const double p = oracle::bpsk_ber(6.0);
  const double n = static_cast<double>(rep.points[0].bits_sent);
  const double sd = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(rep.points[0].ber - p) <= 4 * sd);
}

TEST_CASE("noise-free precoded run is error-free with zero residual") {
  LinkConfig cfg;
  cfg.kernel = gen_random(make_grid(2, 8), 5, 50.0);
  cfg.scheme = ModScheme::qam16;
  cfg.snr_db_points = {std::numeric_limits<double>::infinity()};
  cfg.trials_per_point = 20;
  cfg.precoding = Precoding::spatio_temporal;
  cfg.seed = 6;
  LinkReport rep = run_link(cfg);
  CHECK(rep.points[0].bit_errors == 0);
  CHECK(rep.points[0].max_residual <= 1e-10);
  CHECK(rep.points[0].kept_modes == 16);
}

TEST_CASE("reports are identical for any thread count") {
  LinkConfig cfg;
  cfg.kernel = gen_random(make_grid(2, 6), 77, 30.0);
  cfg.scheme = ModScheme::qpsk;
  cfg.snr_db_points = {4.0, 8.0};
  cfg.trials_per_point = 33;
  cfg.precoding = Precoding::spatio_temporal;
  cfg.precoder.power = PowerPolicy::normalize;
  cfg.precoder.power_target = 12.0;
  cfg.seed = 11;

  cfg.threads = 1;
  LinkReport a = run_link(cfg);
  cfg.threads = 4;
  LinkReport b = run_link(cfg);
  cfg.threads = 33;
  LinkReport c = run_link(cfg);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].bit_errors == b.points[i].bit_errors);
    CHECK(a.points[i].ber == b.points[i].ber);
    CHECK(a.points[i].mean_residual == b.points[i].mean_residual);
    CHECK(a.points[i].mean_tx_power == b.points[i].mean_tx_power);
    CHECK(a.points[i].bit_errors == c.points[i].bit_errors);
    CHECK(a.points[i].mean_residual == c.points[i].mean_residual);
  }
}

TEST_CASE("equal-power comparison: spatio-temporal beats none on a mixing channel") {
  std::vector<DriftingTap> taps(2);
  taps[0].base_delay = 0;
  taps[0].gain = 1.0;
  taps[0].leakage = 0.6;
  taps[1].base_delay = 1;
  taps[1].gain = 0.4;
  taps[1].doppler = 0.03;
  taps[1].leakage = 0.8;
  ChannelKernel k =
      gen_nonstationary(make_drifting_spec(make_grid(2, 16), taps, 3));

  LinkConfig cfg;
  cfg.kernel = k;
  cfg.scheme = ModScheme::qpsk;
  cfg.snr_db_points = {12.0};
  cfg.trials_per_point = 60;
  cfg.seed = 4;
  cfg.precoder.power = PowerPolicy::normalize;
  cfg.precoder.power_target = static_cast<double>(k.in_shape.size());

  cfg.precoding = Precoding::none;
  LinkReport plain = run_link(cfg);
  cfg.precoding = Precoding::spatio_temporal;
  LinkReport precoded = run_link(cfg);
  CHECK(plain.points[0].ber > precoded.points[0].ber);
  CHECK(precoded.points[0].mean_residual <= 1e-9);
  // Equal mean transmit power by construction.
  CHECK(plain.points[0].mean_tx_power ==
        doctest::Approx(precoded.points[0].mean_tx_power).epsilon(1e-12));
}

TEST_CASE("spatial precoding clears same-time mixing but not delays") {
  // Same-time cross-user mixing only: spatial inversion should be enough.
  std::vector<DriftingTap> taps(1);
  taps[0].base_delay = 0;
  taps[0].leakage = 0.7;
  ChannelKernel k =
      gen_nonstationary(make_drifting_spec(make_grid(4, 8), taps, 8));
  LinkConfig cfg;
  cfg.kernel = k;
  cfg.scheme = ModScheme::qpsk;
  cfg.snr_db_points = {std::numeric_limits<double>::infinity()};
  cfg.trials_per_point = 10;
  cfg.seed = 9;
  cfg.precoding = Precoding::spatial;
  LinkReport rep = run_link(cfg);
  CHECK(rep.points[0].bit_errors == 0);
  CHECK(rep.points[0].max_residual <= 1e-10);
  CHECK(rep.points[0].kept_modes == 4 * 8);
}

TEST_CASE("ber csv layout and sweep ordering") {
  fs::path dir = temp_dir();
  LinkConfig cfg;
  cfg.kernel = identity_kernel(make_grid(1, 16));
  cfg.scheme = ModScheme::bpsk;
  cfg.snr_db_points = {8.0, 4.0, std::numeric_limits<double>::infinity()};
  cfg.trials_per_point = 3;
  cfg.seed = 1;
  cfg.config_digest = "deadbeef00000000";
  fs::path csv = dir / "ber.csv";
  LinkReport rep = ber_sweep(cfg, csv);

  REQUIRE(rep.points.size() == 3);
  CHECK(rep.points[0].snr_db == 4.0);
  CHECK(rep.points[1].snr_db == 8.0);
  CHECK(std::isinf(rep.points[2].snr_db));

  std::string text = read_text_file(csv);
  CHECK(text.rfind("snr_db,ber,bit_errors,bits_sent,residual,kept_modes\n",
                   0) == 0);
  CHECK(text.find("\ninf,0,0,48,0,0\n") != std::string::npos);

  std::string sidecar = read_text_file(dir / "ber_summary.json");
  CHECK(sidecar.find("\"config_digest\": \"deadbeef00000000\"") !=
        std::string::npos);
  CHECK(sidecar.find("\"seed\": 1") != std::string::npos);

  // Byte-identical reruns, irrespective of threads.
  cfg.threads = 3;
  fs::path csv2 = dir / "ber2.csv";
  ber_sweep(cfg, csv2);
  CHECK(read_text_file(csv2) == text);
  CHECK(read_text_file(dir / "ber2_summary.json") == sidecar);
}

TEST_CASE("link configuration is validated") {
  LinkConfig cfg;
  cfg.kernel = identity_kernel(make_grid(1, 4));
  cfg.snr_db_points = {};
  cfg.trials_per_point = 1;
  CHECK_THROWS_AS(run_link(cfg), Error);
  cfg.snr_db_points = {3.0};
  cfg.trials_per_point = 0;
  CHECK_THROWS_AS(run_link(cfg), Error);
  cfg.trials_per_point = 1;
  cfg.kernel = make_kernel(make_grid(1, 2), make_grid(1, 4),
                           Eigen::MatrixXcd::Zero(2, 4));
  CHECK_THROWS_AS(run_link(cfg), Error);
}
