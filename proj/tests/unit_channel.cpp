#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "corpus.hpp"
#include "hogmt/channel.hpp"
#include "hogmt/error.hpp"

using namespace hogmt;

namespace {

std::string check_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("stationary kernels depend on the time difference only") {
  GridShape g = make_grid(2, 6);
  StationarySpec spec = random_stationary_spec(g, 3, 42);
  ChannelKernel k = gen_stationary(spec);
  for (int u = 0; u < 2; ++u) {
    for (int u_in = 0; u_in < 2; ++u_in) {
      for (int t = 0; t < 6; ++t) {
        for (int t_in = 0; t_in < 6; ++t_in) {
          std::complex<double> v = k.at(u, t, u_in, t_in);
          int d = t - t_in;
          if (d >= 0 && d < 3) {
            CHECK(v == spec.taps[static_cast<std::size_t>(d)](u, u_in));
          } else {
            CHECK(v == std::complex<double>(0, 0));
          }
        }
      }
    }
  }
}

TEST_CASE("random stationary taps follow a decaying delay profile") {
  StationarySpec spec = random_stationary_spec(make_grid(4, 16), 4, 7);
  REQUIRE(spec.taps.size() == 4);
  // Power halves per delay step on average; check the trend loosely on
  // tap norms (they are deterministic for the seed).
  CHECK(spec.taps[0].norm() > spec.taps[3].norm());
}

TEST_CASE("non-stationary generation follows explicit trajectories") {
  GridShape g = make_grid(1, 4);
  NsTap tap;
  tap.delay = {0, 1, 2, 1};
  tap.gain = {{1, 0}, {0, 1}, {-1, 0}, {0.5, 0.5}};
  tap.mixing = Eigen::MatrixXcd::Identity(1, 1);
  ChannelKernel k = gen_nonstationary({g, {tap}});
  CHECK(k.at(0, 0, 0, 0) == std::complex<double>(1, 0));
  CHECK(k.at(0, 1, 0, 0) == std::complex<double>(0, 1));
  CHECK(k.at(0, 2, 0, 0) == std::complex<double>(-1, 0));
  CHECK(k.at(0, 3, 0, 2) == std::complex<double>(0.5, 0.5));
  // Everything else is zero.
  int nonzero = 0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      nonzero += k.data(r, c) != std::complex<double>(0, 0);
    }
  }
  CHECK(nonzero == 4);
}

TEST_CASE("a tap delayed past the frame start stays silent") {
  GridShape g = make_grid(1, 3);
  NsTap tap;
  tap.delay = {2, 2, 2};  // t = 0, 1 have no source sample
  tap.gain = {{1, 0}, {1, 0}, {1, 0}};
  tap.mixing = Eigen::MatrixXcd::Identity(1, 1);
  ChannelKernel k = gen_nonstationary({g, {tap}});
  CHECK(k.data.row(0).norm() == 0.0);
  CHECK(k.data.row(1).norm() == 0.0);
  CHECK(k.at(0, 2, 0, 0) == std::complex<double>(1, 0));
}

TEST_CASE("negative delays mean a non-causal kernel and are rejected") {
  GridShape g = make_grid(1, 2);
  NsTap tap;
  tap.delay = {0, -1};
  tap.gain = {{1, 0}, {1, 0}};
  tap.mixing = Eigen::MatrixXcd::Identity(1, 1);
  CHECK(check_code([&] { gen_nonstationary({g, {tap}}); }) == "non_causal");
}

TEST_CASE("constant trajectories reduce to the frozen stationary kernel") {
  GridShape g = make_grid(3, 8);
  std::vector<DriftingTap> taps(2);
  taps[0].base_delay = 0;
  taps[0].gain = {0.9, 0.1};
  taps[0].leakage = 0.4;
  taps[1].base_delay = 2;
  taps[1].gain = {0.3, -0.2};
  taps[1].leakage = 0.7;
  // No drift, no doppler: the channel never moves.
  NsChannelSpec ns = make_drifting_spec(g, taps, 99);
  ChannelKernel moving = gen_nonstationary(ns);
  ChannelKernel frozen = gen_stationary(freeze_at_start(ns));
  CHECK((moving.data - frozen.data).norm() <= 1e-15 * frozen.data.norm());
}

TEST_CASE("drift and doppler make the kernel time-varying") {
  GridShape g = make_grid(2, 16);
  std::vector<DriftingTap> taps(1);
  taps[0].base_delay = 0;
  taps[0].doppler = 0.05;
  NsChannelSpec ns = make_drifting_spec(g, taps, 5);
  ChannelKernel moving = gen_nonstationary(ns);
  ChannelKernel frozen = gen_stationary(freeze_at_start(ns));
  CHECK((moving.data - frozen.data).norm() > 1e-3);
  // Same-delay diagonal rotates with time.
  CHECK(std::abs(moving.at(0, 0, 0, 0) - moving.at(0, 5, 0, 5)) > 1e-3);
}

TEST_CASE("drifting spec validates its parameters") {
  GridShape g = make_grid(1, 4);
  std::vector<DriftingTap> taps(1);
  taps[0].base_delay = -1.0;
  CHECK(check_code([&] { make_drifting_spec(g, taps, 0); }) == "bad_policy");
  CHECK(check_code([&] {
          make_drifting_spec(g, {}, 0);
        }) == "index_range");
}

TEST_CASE("random kernels are seed-deterministic") {
  GridShape g = make_grid(2, 5);
  ChannelKernel a = gen_random(g, 123);
  ChannelKernel b = gen_random(g, 123);
  ChannelKernel c = gen_random(g, 124);
  CHECK((a.data - b.data).norm() == 0.0);
  CHECK((a.data - c.data).norm() > 0.0);
}

TEST_CASE("condition targets are hit essentially exactly") {
  for (double target : {1.0, 30.0, 1000.0}) {
    ChannelKernel k = gen_random(make_grid(2, 6), 9, target);
    CHECK(corpus::measured_condition(k.data) ==
          doctest::Approx(target).epsilon(1e-6));
  }
  // Target 1 means the kernel is a scaled isometry.
  ChannelKernel iso = gen_random(make_grid(2, 4), 10, 1.0);
  Eigen::MatrixXcd gram = iso.data.adjoint() * iso.data;
  CHECK((gram - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("unreachable condition targets are rejected") {
  CHECK(check_code([&] { gen_random(make_grid(1, 1), 0, 50.0); }) ==
        "bad_policy");
  CHECK(check_code([&] { gen_random(make_grid(1, 2), 0, 0.5); }) ==
        "bad_policy");
}

TEST_CASE("stationary spec validation") {
  CHECK(check_code([&] {
          random_stationary_spec(make_grid(1, 4), 5, 0);  // taps > T
        }) == "index_range");
  StationarySpec spec = random_stationary_spec(make_grid(2, 4), 2, 0);
  spec.taps[1].resize(3, 3);  // wrong user count
  CHECK(check_code([&] { gen_stationary(spec); }) == "shape_mismatch");
}
