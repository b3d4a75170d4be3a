#include "hogmt/channel.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "hogmt/error.hpp"
#include "hogmt/rng.hpp"

namespace hogmt {

namespace {

Eigen::MatrixXcd random_matrix(int rows, int cols, SplitMix64& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = rng.next_complex_gaussian();
    }
  }
  return m;
}

}  // namespace

StationarySpec random_stationary_spec(GridShape shape, int num_taps,
                                      std::uint64_t seed) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  if (num_taps < 1 || num_taps > checked.num_times) {
    fail("index_range", "num_taps must lie in [1, T=" +
                            std::to_string(checked.num_times) + "], got " +
                            std::to_string(num_taps));
  }
  StationarySpec spec;
  spec.shape = checked;
  SplitMix64 rng = substream(seed, 0x5354, 0);  // one stream per spec
  for (int d = 0; d < num_taps; ++d) {
    double scale = std::pow(2.0, -d);  // power-decaying delay profile
    spec.taps.push_back(scale *
                        random_matrix(checked.num_users, checked.num_users,
                                      rng));
  }
  return spec;
}

ChannelKernel gen_stationary(const StationarySpec& spec) {
  GridShape shape = make_grid(spec.shape.num_users, spec.shape.num_times);
  const int num_taps = static_cast<int>(spec.taps.size());
  if (num_taps < 1 || num_taps > shape.num_times) {
    fail("index_range",
         "tap count " + std::to_string(num_taps) + " outside [1, T=" +
             std::to_string(shape.num_times) + "]");
  }
  for (const auto& tap : spec.taps) {
    if (tap.rows() != shape.num_users || tap.cols() != shape.num_users) {
      fail("shape_mismatch", "tap matrices must be Nu x Nu for grid " +
                                 shape.str());
    }
  }
  Eigen::MatrixXcd data =
      Eigen::MatrixXcd::Zero(shape.size(), shape.size());
  for (int u = 0; u < shape.num_users; ++u) {
    for (int t = 0; t < shape.num_times; ++t) {
      for (int d = 0; d < num_taps; ++d) {
        int t_in = t - d;
        if (t_in < 0) {
          continue;  // echo would come from before the frame
        }
        for (int u_in = 0; u_in < shape.num_users; ++u_in) {
          data(flatten(u, t, shape), flatten(u_in, t_in, shape)) +=
              spec.taps[static_cast<std::size_t>(d)](u, u_in);
        }
      }
    }
  }
  return make_kernel(shape, shape, std::move(data));
}

NsChannelSpec make_drifting_spec(GridShape shape,
                                 const std::vector<DriftingTap>& taps,
                                 std::uint64_t seed) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  if (taps.empty()) {
    fail("index_range", "at least one tap required");
  }
  NsChannelSpec spec;
  spec.shape = checked;
  const int nu = checked.num_users;
  const int T = checked.num_times;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const DriftingTap& p = taps[i];
    if (p.base_delay < 0.0 || p.leakage < 0.0) {
      fail("bad_policy", "tap " + std::to_string(i) +
                             ": base_delay and leakage must be >= 0");
    }
    NsTap tap;
    tap.delay.resize(static_cast<std::size_t>(T));
    tap.gain.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      tap.delay[static_cast<std::size_t>(t)] = static_cast<int>(
          std::llround(p.base_delay + p.delay_drift * t));
      double phase = 2.0 * std::numbers::pi * p.doppler * t;
      tap.gain[static_cast<std::size_t>(t)] =
          p.gain * (1.0 + p.gain_drift * t) *
          std::complex<double>(std::cos(phase), std::sin(phase));
    }
    // Cross-user part: a seeded random mixing with zero diagonal,
    // normalized so `leakage` is its largest row magnitude.
    SplitMix64 rng = substream(seed, 0x4d49, i);
    Eigen::MatrixXcd w = random_matrix(nu, nu, rng);
    w.diagonal().setZero();
    double peak = 0.0;
    for (int r = 0; r < nu; ++r) {
      peak = std::max(peak, w.row(r).norm());
    }
    tap.mixing = Eigen::MatrixXcd::Identity(nu, nu);
    if (peak > 0.0 && p.leakage > 0.0) {
      tap.mixing += (p.leakage / peak) * w;
    }
    spec.taps.push_back(std::move(tap));
  }
  return spec;
}

StationarySpec freeze_at_start(const NsChannelSpec& spec) {
  GridShape shape = make_grid(spec.shape.num_users, spec.shape.num_times);
  int max_delay = 0;
  for (const NsTap& tap : spec.taps) {
    if (tap.delay.empty() || tap.gain.empty()) {
      fail("shape_mismatch", "tap has empty trajectories");
    }
    if (tap.delay.front() < 0) {
      fail("non_causal", "tap delay " + std::to_string(tap.delay.front()) +
                             " at t=0 is negative");
    }
    max_delay = std::max(max_delay, tap.delay.front());
  }
  if (max_delay >= shape.num_times) {
    fail("index_range", "frozen delay spread " + std::to_string(max_delay) +
                            " does not fit window T=" +
                            std::to_string(shape.num_times));
  }
  StationarySpec frozen;
  frozen.shape = shape;
  frozen.taps.assign(
      static_cast<std::size_t>(max_delay) + 1,
      Eigen::MatrixXcd::Zero(shape.num_users, shape.num_users));
  for (const NsTap& tap : spec.taps) {
    frozen.taps[static_cast<std::size_t>(tap.delay.front())] +=
        tap.gain.front() * tap.mixing;
  }
  return frozen;
}

ChannelKernel gen_nonstationary(const NsChannelSpec& spec) {
  GridShape shape = make_grid(spec.shape.num_users, spec.shape.num_times);
  const std::size_t T = static_cast<std::size_t>(shape.num_times);
  Eigen::MatrixXcd data =
      Eigen::MatrixXcd::Zero(shape.size(), shape.size());
  for (std::size_t i = 0; i < spec.taps.size(); ++i) {
    const NsTap& tap = spec.taps[i];
    if (tap.delay.size() != T || tap.gain.size() != T) {
      fail("shape_mismatch", "tap " + std::to_string(i) +
                                 " trajectories must have length T=" +
                                 std::to_string(T));
    }
    if (tap.mixing.rows() != shape.num_users ||
        tap.mixing.cols() != shape.num_users) {
      fail("shape_mismatch", "tap " + std::to_string(i) +
                                 " mixing must be Nu x Nu for grid " +
                                 shape.str());
    }
    for (int t = 0; t < shape.num_times; ++t) {
      int d = tap.delay[static_cast<std::size_t>(t)];
      if (d < 0) {
        fail("non_causal", "tap " + std::to_string(i) + " has delay " +
                               std::to_string(d) + " < 0 at t=" +
                               std::to_string(t));
      }
      int t_in = t - d;
      if (t_in < 0) {
        continue;  // echo would come from before the frame
      }
      std::complex<double> gain = tap.gain[static_cast<std::size_t>(t)];
      for (int u = 0; u < shape.num_users; ++u) {
        for (int u_in = 0; u_in < shape.num_users; ++u_in) {
          data(flatten(u, t, shape), flatten(u_in, t_in, shape)) +=
              gain * tap.mixing(u, u_in);
        }
      }
    }
  }
  return make_kernel(shape, shape, std::move(data));
}

ChannelKernel gen_random(GridShape shape, std::uint64_t seed,
                         std::optional<double> condition_target) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  const int m = checked.size();
  SplitMix64 rng = substream(seed, 0x524e, 0);
  Eigen::MatrixXcd data = random_matrix(m, m, rng);
  if (!condition_target) {
    return make_kernel(checked, checked, std::move(data));
  }
  const double target = *condition_target;
  if (!(target >= 1.0)) {
    fail("bad_policy", "condition_target must be >= 1, got " +
                           std::to_string(target));
  }
  if (m == 1 && target != 1.0) {
    fail("bad_policy",
         "a 1x1 kernel always has condition number 1; target " +
             std::to_string(target) + " is unreachable");
  }
  // Keep the random singular directions, replace the spectrum with a
  // log-uniform ramp from 1 down to 1/target.
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(
      data, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sigmas(m);
  for (int n = 0; n < m; ++n) {
    double frac = m > 1 ? static_cast<double>(n) / (m - 1) : 0.0;
    sigmas(n) = std::pow(target, -frac);
  }
  Eigen::MatrixXcd shaped =
      svd.matrixU() * sigmas.asDiagonal() * svd.matrixV().adjoint();
  return make_kernel(checked, checked, std::move(shaped));
}

}  // namespace hogmt
