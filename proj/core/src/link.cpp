#include "hogmt/link.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "hogmt/decompose.hpp"
#include "hogmt/error.hpp"
#include "hogmt/io.hpp"

namespace hogmt {

Precoding parse_precoding(const std::string& name) {
  if (name == "none") return Precoding::none;
  if (name == "spatial") return Precoding::spatial;
  if (name == "spatio_temporal") return Precoding::spatio_temporal;
  fail("bad_precoding", "unknown precoding mode '" + name + "'");
}

std::string precoding_name(Precoding p) {
  switch (p) {
    case Precoding::none:
      return "none";
    case Precoding::spatial:
      return "spatial";
    case Precoding::spatio_temporal:
      return "spatio_temporal";
  }
  fail("bad_precoding", "unknown precoding mode");
}

SymbolFrame awgn(const SymbolFrame& x, double snr_db, SplitMix64& rng) {
  if (std::isinf(snr_db) && snr_db > 0.0) {
    return x;  // noise-free channel, bit for bit
  }
  if (std::isnan(snr_db)) {
    fail("non_finite", "snr_db is NaN");
  }
  const double sigma = std::sqrt(std::pow(10.0, -snr_db / 10.0));
  SymbolFrame out = x;
  for (Eigen::Index m = 0; m < out.data.size(); ++m) {
    out.data(m) += sigma * rng.next_complex_gaussian();
  }
  return out;
}

namespace {

struct TrialOut {
  std::uint64_t bit_errors = 0;
  double residual = 0.0;
  double tx_power = 0.0;
  int kept_modes = 0;
};

// Everything a trial needs, computed once per run.
struct LinkPlan {
  const LinkConfig* cfg = nullptr;
  GridShape shape;
  int bits_per_frame = 0;
  EigenSystem joint;                 // spatio_temporal
  std::vector<EigenSystem> slices;   // spatial, one per time slot
  PrecoderConfig mode_cfg;           // power handled at frame level instead
};

LinkPlan prepare(const LinkConfig& cfg) {
  if (cfg.kernel.out_shape != cfg.kernel.in_shape) {
    fail("shape_mismatch",
         "link simulation needs a square kernel, got " +
             cfg.kernel.out_shape.str() + " -> " + cfg.kernel.in_shape.str());
  }
  if (cfg.trials_per_point < 1) {
    fail("bad_policy", "trials_per_point must be >= 1");
  }
  if (cfg.snr_db_points.empty()) {
    fail("bad_policy", "no SNR points requested");
  }
  if (cfg.precoder.power == PowerPolicy::normalize &&
      !(cfg.precoder.power_target > 0.0)) {
    fail("bad_policy", "power_target must be > 0 under normalize");
  }
  LinkPlan plan;
  plan.cfg = &cfg;
  plan.shape = cfg.kernel.out_shape;
  plan.bits_per_frame = plan.shape.size() * bits_per_symbol(cfg.scheme);
  plan.mode_cfg = cfg.precoder;
  plan.mode_cfg.power = PowerPolicy::none;  // applied after assembly
  if (cfg.precoding == Precoding::spatio_temporal) {
    plan.joint = decompose_4d(cfg.kernel);
  } else if (cfg.precoding == Precoding::spatial) {
    const int nu = plan.shape.num_users;
    for (int t = 0; t < plan.shape.num_times; ++t) {
      Eigen::MatrixXcd slice(nu, nu);
      for (int u = 0; u < nu; ++u) {
        for (int u_in = 0; u_in < nu; ++u_in) {
          slice(u, u_in) = cfg.kernel.data(flatten(u, t, plan.shape),
                                           flatten(u_in, t, plan.shape));
        }
      }
      plan.slices.push_back(decompose_2d(slice));
    }
  }
  return plan;
}

TrialOut run_trial(const LinkPlan& plan, int point, int trial) {
  const LinkConfig& cfg = *plan.cfg;
  SplitMix64 rng = substream(cfg.seed, static_cast<std::uint64_t>(point),
                             static_cast<std::uint64_t>(trial));
  BitVec bits(static_cast<std::size_t>(plan.bits_per_frame));
  for (auto& b : bits) {
    b = static_cast<std::uint8_t>(rng.next() >> 63);
  }
  const SymbolFrame s = modulate(bits, cfg.scheme, plan.shape);

  TrialOut out;
  Eigen::VectorXcd x_raw;
  switch (cfg.precoding) {
    case Precoding::none:
      x_raw = s.data;
      break;
    case Precoding::spatio_temporal: {
      PrecodeResult res = precode_with(plan.joint, s, plan.mode_cfg);
      x_raw = std::move(res.x.data);
      out.kept_modes = res.kept_modes;
      break;
    }
    case Precoding::spatial: {
      const int nu = plan.shape.num_users;
      x_raw.resize(plan.shape.size());
      Eigen::VectorXcd column(nu);
      for (int t = 0; t < plan.shape.num_times; ++t) {
        for (int u = 0; u < nu; ++u) {
          column(u) = s.data(flatten(u, t, plan.shape));
        }
        PrecodeResult res = precode_with(
            plan.slices[static_cast<std::size_t>(t)],
            SymbolFrame{make_grid(nu, 1), column}, plan.mode_cfg);
        for (int u = 0; u < nu; ++u) {
          x_raw(flatten(u, t, plan.shape)) = res.x.data(u);
        }
        out.kept_modes += res.kept_modes;
      }
      break;
    }
  }

  double scale = 1.0;
  if (cfg.precoder.power == PowerPolicy::normalize) {
    const double raw_power = x_raw.squaredNorm();
    if (raw_power <= 0.0) {
      fail("zero_frame_power", "cannot normalize an all-zero transmit frame");
    }
    scale = std::sqrt(cfg.precoder.power_target / raw_power);
  }
  Eigen::VectorXcd x = scale * x_raw;
  out.tx_power = x.squaredNorm();

  // Noise-free channel output, receiver gain undone: the residual tells
  // how far even a perfect-SNR receiver stays from the intended symbols.
  Eigen::VectorXcd r0 = cfg.kernel.data * x;
  out.residual = (r0 / scale - s.data).norm() / s.data.norm();

  SymbolFrame r = awgn(SymbolFrame{plan.shape, std::move(r0)},
                       cfg.snr_db_points[static_cast<std::size_t>(point)],
                       rng);
  r.data /= scale;  // fixed receive gain, known from the power policy
  const BitVec got = demodulate(r, cfg.scheme);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out.bit_errors += bits[i] != got[i];
  }
  return out;
}

}  // namespace

LinkReport run_link(const LinkConfig& cfg) {
  const LinkPlan plan = prepare(cfg);
  const int trials = cfg.trials_per_point;
  const int workers =
      std::max(1, std::min(cfg.threads, trials));

  LinkReport report;
  report.seed = cfg.seed;
  report.config_digest = cfg.config_digest;

  for (std::size_t p = 0; p < cfg.snr_db_points.size(); ++p) {
    std::vector<TrialOut> slots(static_cast<std::size_t>(trials));
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run_range = [&](int lo, int hi) {
      for (int trial = lo; trial < hi; ++trial) {
        try {
          slots[static_cast<std::size_t>(trial)] =
              run_trial(plan, static_cast<int>(p), trial);
        } catch (...) {
          std::lock_guard<std::mutex> guard(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
          return;
        }
      }
    };

    if (workers == 1) {
      run_range(0, trials);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (trials + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(trials, lo + chunk);
        if (lo < hi) {
          pool.emplace_back(run_range, lo, hi);
        }
      }
      for (auto& th : pool) {
        th.join();
      }
    }
    if (first_error) {
      std::rethrow_exception(first_error);
    }

    // Reduce in fixed trial order so floating-point sums never depend on
    // the thread count.
    LinkPoint point;
    point.snr_db = cfg.snr_db_points[p];
    point.kept_modes = slots.front().kept_modes;
    double residual_sum = 0.0;
    double power_sum = 0.0;
    for (const TrialOut& t : slots) {
      point.bit_errors += t.bit_errors;
      residual_sum += t.residual;
      point.max_residual = std::max(point.max_residual, t.residual);
      power_sum += t.tx_power;
    }
    point.bits_sent = static_cast<std::uint64_t>(trials) *
                      static_cast<std::uint64_t>(plan.bits_per_frame);
    point.ber = static_cast<double>(point.bit_errors) /
                static_cast<double>(point.bits_sent);
    point.mean_residual = residual_sum / trials;
    point.mean_tx_power = power_sum / trials;
    report.points.push_back(point);
  }
  return report;
}

void write_ber_csv(const LinkReport& report,
                   const std::filesystem::path& path) {
  std::string out = "snr_db,ber,bit_errors,bits_sent,residual,kept_modes\n";
  for (const LinkPoint& p : report.points) {
    out += format_double(p.snr_db);
    out += ',';
    out += format_double(p.ber);
    out += ',';
    out += std::to_string(p.bit_errors);
    out += ',';
    out += std::to_string(p.bits_sent);
    out += ',';
    out += format_double(p.mean_residual);
    out += ',';
    out += std::to_string(p.kept_modes);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_ber_summary_json(const LinkReport& report,
                            const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["config_digest"] = report.config_digest;
  doc["seed"] = report.seed;
  doc["points"] = nlohmann::json::array();
  for (const LinkPoint& p : report.points) {
    nlohmann::json row;
    row["snr_db"] = format_double(p.snr_db);  // string: JSON lacks inf
    row["ber"] = p.ber;
    row["bit_errors"] = p.bit_errors;
    row["bits_sent"] = p.bits_sent;
    row["residual"] = p.mean_residual;
    row["max_residual"] = p.max_residual;
    row["kept_modes"] = p.kept_modes;
    row["mean_tx_power"] = p.mean_tx_power;
    doc["points"].push_back(row);
  }
  write_text_file(path, doc.dump(2) + "\n");
}

LinkReport ber_sweep(const LinkConfig& config,
                     const std::filesystem::path& csv_path) {
  LinkConfig sorted = config;
  std::sort(sorted.snr_db_points.begin(), sorted.snr_db_points.end());
  LinkReport report = run_link(sorted);
  write_ber_csv(report, csv_path);
  std::filesystem::path sidecar = csv_path;
  sidecar.replace_filename(csv_path.stem().string() + "_summary.json");
  write_ber_summary_json(report, sidecar);
  return report;
}

}  // namespace hogmt
