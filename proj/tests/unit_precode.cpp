#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "corpus.hpp"
#include "hogmt/channel.hpp"
#include "hogmt/error.hpp"
#include "hogmt/precode.hpp"
#include "oracles.hpp"

using namespace hogmt;

namespace {

SymbolFrame random_target(GridShape shape, std::uint64_t seed) {
  SplitMix64 rng = substream(seed, 0x7a67, 1);
  Eigen::VectorXcd s(shape.size());
  for (int m = 0; m < shape.size(); ++m) {
    s(m) = rng.next_complex_gaussian();
  }
  return make_frame(shape, std::move(s));
}

std::string check_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("identity kernel: the precoded frame is the target itself") {
  GridShape g = make_grid(2, 4);
  SymbolFrame s = random_target(g, 1);
  PrecodeResult res = precode_st(identity_kernel(g), s, {});
  CHECK(res.kept_modes == 8);
  CHECK(res.predicted_residual <= 1e-13);
  CHECK((res.x.data - s.data).norm() <= 1e-13 * s.data.norm());
  CHECK(res.power_scale == 1.0);
}

TEST_CASE("positive diagonal kernel inverts each sample exactly") {
  GridShape g = make_grid(1, 3);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  d(2, 2) = 0.5;
  SymbolFrame s = random_target(g, 2);
  PrecodeResult res = precode_st(make_kernel(g, g, d), s, {});
  CHECK(std::abs(res.x.data(0) - s.data(0) / 2.0) <= 1e-14);
  CHECK(std::abs(res.x.data(1) - s.data(1)) <= 1e-14);
  CHECK(std::abs(res.x.data(2) - s.data(2) * 2.0) <= 1e-14);
}

TEST_CASE("full-rank kernels: channel output reproduces the target") {
  for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
    ChannelKernel k = gen_random(make_grid(2, 8), seed, 100.0);
    SymbolFrame s = random_target(k.out_shape, seed);
    PrecodeResult res = precode_st(k, s, {});
    CHECK(res.kept_modes == 16);
    CHECK(res.predicted_residual <= 1e-10);
    SymbolFrame r = apply_kernel(k, res.x);
    CHECK((r.data - s.data).norm() / s.data.norm() <= 1e-10);
  }
}

TEST_CASE("coefficients expand the target on the output eigenfunctions") {
  ChannelKernel k = gen_random(make_grid(2, 4), 40, 30.0);
  EigenSystem sys = decompose_4d(k);
  SymbolFrame s = random_target(k.out_shape, 41);
  PrecodeResult res = precode_with(sys, s, {});
  REQUIRE(res.coefficients.size() == sys.modes());
  for (int n = 0; n < sys.modes(); ++n) {
    std::complex<double> expected =
        inner(s.data, sys.psi.col(n)) / sys.sigmas(n);
    CHECK(std::abs(res.coefficients(n) - expected) <= 1e-12);
  }
  // x is assembled from the stored input-side columns with those weights.
  Eigen::VectorXcd assembled =
      sys.phi.leftCols(res.coefficients.size()) * res.coefficients;
  CHECK((assembled - res.x.data).norm() <= 1e-14);
}

TEST_CASE("precoding equals the minimum-norm least-squares solution") {
  SUBCASE("full-rank members agree with the QR oracle") {
    ChannelKernel k = gen_random(make_grid(4, 4), 50, 200.0);
    SymbolFrame s = random_target(k.out_shape, 51);
    PrecodeResult res = precode_st(k, s, {});
    Eigen::VectorXcd ref = oracle::qr_solve(k.data, s.data);
    CHECK((res.x.data - ref).norm() / ref.norm() <= 1e-10);
  }
  SUBCASE("rank-deficient members agree with the spectral oracle") {
    for (const corpus::Entry& entry : corpus::rank_deficient_corpus()) {
      INFO(entry.name);
      SymbolFrame s = random_target(entry.kernel.out_shape, 52);
      PrecoderConfig cfg;
      cfg.sigma_floor_rel = 1e-8;
      PrecodeResult res = precode_st(entry.kernel, s, cfg);
      Eigen::VectorXcd ref =
          oracle::min_norm_lstsq(entry.kernel.data, s.data, 1e-8);
      CHECK((res.x.data - ref).norm() / ref.norm() <= 1e-9);
      CHECK(res.kept_modes < entry.kernel.out_shape.size());

      // The predicted residual is the true distance from the reachable
      // span, measured independently through the channel output.
      Eigen::VectorXcd reached = entry.kernel.data * ref;
      CHECK(res.predicted_residual ==
            doctest::Approx((reached - s.data).norm()).epsilon(1e-9));
    }
  }
}

TEST_CASE("sigma floor drops unusable modes instead of dividing by them") {
  GridShape g = make_grid(1, 3);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  d(2, 2) = 1e-15;  // far below the default relative floor
  ChannelKernel k = make_kernel(g, g, d);
  SymbolFrame s = random_target(g, 3);
  PrecodeResult res = precode_st(k, s, {});
  CHECK(res.kept_modes == 2);
  CHECK(res.predicted_residual ==
        doctest::Approx(std::abs(s.data(2))).epsilon(1e-12));
  // The transmit frame has no component on the dropped direction.
  CHECK(std::abs(res.x.data(2)) <= 1e-12);
}

TEST_CASE("precoder error paths") {
  GridShape g = make_grid(1, 3);
  SymbolFrame s = random_target(g, 4);

  SUBCASE("zero kernel has no usable mode") {
    ChannelKernel zero =
        make_kernel(g, g, Eigen::MatrixXcd::Zero(3, 3));
    CHECK(check_code([&] { precode_st(zero, s, {}); }) ==
          "rank_zero_kernel");
  }
  SUBCASE("disabled floor on a singular kernel is refused") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 1.0;  // rank one
    PrecoderConfig cfg;
    cfg.sigma_floor_rel = 0.0;
    CHECK(check_code([&] {
            precode_st(make_kernel(g, g, d), s, cfg);
          }) == "singular_mode");
  }
  SUBCASE("frame on the wrong grid") {
    ChannelKernel k = identity_kernel(make_grid(2, 3));
    CHECK(check_code([&] { precode_st(k, s, {}); }) == "shape_mismatch");
  }
  SUBCASE("normalize needs a positive target power") {
    PrecoderConfig cfg;
    cfg.power = PowerPolicy::normalize;
    cfg.power_target = 0.0;
    CHECK(check_code([&] {
            precode_st(identity_kernel(g), s, cfg);
          }) == "bad_policy");
  }
}

TEST_CASE("power normalization hits the target exactly and is recorded") {
  ChannelKernel k = gen_random(make_grid(2, 4), 60, 20.0);
  SymbolFrame s = random_target(k.out_shape, 61);
  PrecoderConfig cfg;
  cfg.power = PowerPolicy::normalize;
  cfg.power_target = 8.0;
  PrecodeResult res = precode_st(k, s, cfg);
  CHECK(res.x.data.squaredNorm() == doctest::Approx(8.0).epsilon(1e-12));
  // Undoing the recorded scale recovers the raw minimum-norm solution.
  PrecodeResult raw = precode_st(k, s, {});
  CHECK((res.x.data / res.power_scale - raw.x.data).norm() <=
        1e-12 * raw.x.data.norm());
}

TEST_CASE("spatial precoder handles one time slice") {
  SplitMix64 rng = substream(70, 0, 0);
  Eigen::MatrixXcd spatial(3, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      spatial(r, c) = rng.next_complex_gaussian();
    }
  }
  spatial += 3.0 * Eigen::MatrixXcd::Identity(3, 3);  // keep it invertible
  Eigen::VectorXcd s(3);
  s << std::complex<double>(1, 0), std::complex<double>(0, 1),
      std::complex<double>(-1, 1);
  PrecodeResult res = precode_spatial(spatial, s, {});
  CHECK((spatial * res.x.data - s).norm() <= 1e-11 * s.norm());
  CHECK(res.kept_modes == 3);
}

TEST_CASE("projection coefficients: orthogonal dictionaries in closed form") {
  GridShape g = make_grid(1, 4);
  ChannelKernel k = identity_kernel(g);
  // Mapped dictionary stays orthogonal through the identity, so each
  // coefficient is <s, c_n> / ||c_n||^2 with no coupling.
  std::vector<SymbolFrame> basis;
  Eigen::MatrixXcd dirs = Eigen::MatrixXcd::Zero(4, 3);
  dirs(0, 0) = 2.0;
  dirs(1, 1) = {0.0, 1.0};
  dirs(2, 2) = -0.5;
  for (int n = 0; n < 3; ++n) {
    basis.push_back(make_frame(g, dirs.col(n)));
  }
  SymbolFrame s = random_target(g, 71);
  Eigen::VectorXcd closed(3);
  for (int n = 0; n < 3; ++n) {
    closed(n) = inner(s.data, dirs.col(n)) / dirs.col(n).squaredNorm();
  }
  Eigen::VectorXcd direct = solve_projection_coefficients(
      k, s, basis, ProjectionMethod::gram_solve);
  Eigen::VectorXcd swept = solve_projection_coefficients(
      k, s, basis, ProjectionMethod::gauss_seidel);
  CHECK((direct - closed).norm() <= 1e-12);
  CHECK((swept - closed).norm() <= 1e-12);
}

TEST_CASE("projection coefficients: coupled dictionary, both methods agree") {
  ChannelKernel k = gen_random(make_grid(1, 5), 80, 10.0);
  SymbolFrame s = random_target(k.out_shape, 81);
  std::vector<SymbolFrame> basis;
  SplitMix64 rng = substream(82, 0, 0);
  for (int n = 0; n < 4; ++n) {
    Eigen::VectorXcd v(5);
    for (int m = 0; m < 5; ++m) {
      v(m) = rng.next_complex_gaussian();
    }
    basis.push_back(make_frame(k.in_shape, v));
  }
  Eigen::VectorXcd direct = solve_projection_coefficients(
      k, s, basis, ProjectionMethod::gram_solve);
  GaussSeidelOptions opts;
  opts.max_iters = 20000;
  opts.tol = 1e-14;
  Eigen::VectorXcd swept = solve_projection_coefficients(
      k, s, basis, ProjectionMethod::gauss_seidel, opts);
  CHECK((direct - swept).norm() / direct.norm() <= 1e-10);

  // Cross-check against elimination on the same normal equations.
  Eigen::MatrixXcd mapped(5, 4);
  for (int n = 0; n < 4; ++n) {
    mapped.col(n) = k.data * basis[static_cast<std::size_t>(n)].data;
  }
  Eigen::VectorXcd ref = oracle::gauss_solve(mapped.adjoint() * mapped,
                                             mapped.adjoint() * s.data);
  CHECK((direct - ref).norm() / ref.norm() <= 1e-10);
}

TEST_CASE("projection coefficient error paths") {
  GridShape g = make_grid(1, 3);
  SymbolFrame s = random_target(g, 90);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;  // e3 lies in the null space
  ChannelKernel k = make_kernel(g, g, d);

  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(3);
  e1(0) = 1.0;
  Eigen::VectorXcd e3 = Eigen::VectorXcd::Zero(3);
  e3(2) = 1.0;

  SUBCASE("duplicate dictionary entries make the Gram system singular") {
    std::vector<SymbolFrame> dup = {make_frame(g, e1), make_frame(g, e1)};
    CHECK(check_code([&] {
            solve_projection_coefficients(k, s, dup,
                                          ProjectionMethod::gram_solve);
          }) == "singular_gram");
  }
  SUBCASE("null-space dictionary entries cannot be swept") {
    std::vector<SymbolFrame> null_basis = {make_frame(g, e1),
                                           make_frame(g, e3)};
    CHECK(check_code([&] {
            solve_projection_coefficients(k, s, null_basis,
                                          ProjectionMethod::gauss_seidel);
          }) == "zero_projection");
  }
  SUBCASE("iteration budget of zero cannot converge") {
    std::vector<SymbolFrame> basis = {make_frame(g, e1)};
    GaussSeidelOptions opts;
    opts.max_iters = 0;
    CHECK(check_code([&] {
            solve_projection_coefficients(k, s, basis,
                                          ProjectionMethod::gauss_seidel,
                                          opts);
          }) == "no_convergence");
  }
  SUBCASE("empty dictionary") {
    CHECK(check_code([&] {
            solve_projection_coefficients(k, s, {},
                                          ProjectionMethod::gram_solve);
          }) == "shape_mismatch");
  }
}
