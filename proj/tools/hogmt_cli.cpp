// hogmt: subcommand front-end for kernel generation, decomposition,
// precoding, link simulation and channel characterization. Every run is
// deterministic for fixed (config, seed); data files never carry
// timestamps. Errors go to stderr as "error_code:<code>: <message>" and
// the exit status is 0 only when all outputs were written.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hogmt/channel.hpp"
#include "hogmt/characterize.hpp"
#include "hogmt/config.hpp"
#include "hogmt/decompose.hpp"
#include "hogmt/error.hpp"
#include "hogmt/io.hpp"
#include "hogmt/link.hpp"
#include "hogmt/precode.hpp"

namespace fs = std::filesystem;
using namespace hogmt;

namespace {

struct GlobalArgs {
  fs::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

fs::path ensure_out_dir(const GlobalArgs& g) {
  fs::create_directories(g.out_dir);
  return g.out_dir;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------- gen

int cmd_gen(const GlobalArgs& g, const fs::path& spec_path) {
  const std::string bytes = read_text_file(spec_path);
  KernelSpecConfig spec = parse_kernel_spec(toml::parse(bytes), "");
  if (g.seed) {
    spec.seed = *g.seed;
  }
  ChannelKernel kernel = build_kernel(spec);

  fs::path dir = ensure_out_dir(g);
  save_kernel(kernel, dir / "kernel.hgmt");

  const char* kinds[] = {"identity", "random", "stationary", "nonstationary"};
  nlohmann::json meta;
  meta["kind"] = kinds[static_cast<int>(spec.kind)];
  meta["num_users"] = spec.shape.num_users;
  meta["num_times"] = spec.shape.num_times;
  meta["seed"] = spec.seed;
  meta["frobenius_norm"] = kernel.data.norm();
  meta["config_digest"] = config_digest(bytes, spec.seed);
  write_json(dir / "kernel_meta.json", meta);

  std::printf("wrote %s and kernel_meta.json\n",
              (dir / "kernel.hgmt").string().c_str());
  return 0;
}

// ---------------------------------------------------------------- decompose

int cmd_decompose(const GlobalArgs& g, const fs::path& kernel_path) {
  ChannelKernel kernel = load_kernel(kernel_path);
  EigenSystem sys = decompose_4d(kernel);

  fs::path dir = ensure_out_dir(g);
  save_sigma_csv(sys.sigmas, dir / "sigmas.csv");
  // Eigenfunction containers: columns indexed as an (modes x 1) grid.
  const GridShape mode_axis = make_grid(sys.modes(), 1);
  save_kernel(ChannelKernel{sys.out_shape, mode_axis, sys.psi},
              dir / "psi.hgmt");
  save_kernel(ChannelKernel{sys.in_shape, mode_axis, sys.phi},
              dir / "phi.hgmt");

  std::printf("wrote sigmas.csv, psi.hgmt, phi.hgmt (%d modes) to %s\n",
              sys.modes(), dir.string().c_str());
  return 0;
}

// ------------------------------------------------------------------ precode

int cmd_precode(const GlobalArgs& g, const fs::path& kernel_path,
                const fs::path& frame_path, double sigma_floor_rel,
                bool verify) {
  ChannelKernel kernel = load_kernel(kernel_path);
  SymbolFrame s = load_frame_csv(frame_path);

  PrecoderConfig cfg;
  cfg.sigma_floor_rel = sigma_floor_rel;
  PrecodeResult res = precode_st(kernel, s, cfg);

  fs::path dir = ensure_out_dir(g);
  save_frame_csv(res.x, dir / "x.csv");
  nlohmann::json summary;
  summary["kept_modes"] = res.kept_modes;
  summary["predicted_residual"] = res.predicted_residual;
  summary["power_scale"] = res.power_scale;
  summary["transmit_power"] = res.x.data.squaredNorm();
  write_json(dir / "precode_summary.json", summary);

  if (verify) {
    SymbolFrame r = apply_kernel(kernel, res.x);
    const double residual = (r.data - s.data).norm() / s.data.norm();
    std::printf("verify_residual=%s\n", format_double(residual).c_str());
  }
  std::printf("wrote x.csv and precode_summary.json to %s\n",
              dir.string().c_str());
  return 0;
}

// ---------------------------------------------------------------------- ber

int cmd_ber(const GlobalArgs& g, const fs::path& config_path) {
  LinkConfig cfg = parse_link_config(config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.config_digest =
        config_digest(read_text_file(config_path), cfg.seed);
  }
  if (g.threads > 0) {
    cfg.threads = g.threads;
  }

  fs::path dir = ensure_out_dir(g);
  ber_sweep(cfg, dir / "ber.csv");

  std::string plot =
      "# Bit error rate sweep; render with: gnuplot ber.gp\n"
      "# (non-finite SNR rows, if any, are skipped by the filter below)\n"
      "set datafile separator \",\"\n"
      "set terminal pngcairo size 800,520\n"
      "set output \"ber.png\"\n"
      "set grid\n"
      "set logscale y\n"
      "set xlabel \"SNR [dB]\"\n"
      "set ylabel \"bit error rate\"\n"
      "plot \"ber.csv\" skip 1 using "
      "(valid(1) ? $1 : NaN):($2 > 0 ? $2 : NaN) "
      "with linespoints pt 7 title \"measured\"\n";
  write_text_file(dir / "ber.gp", plot);

  std::printf("wrote ber.csv, ber_summary.json, ber.gp to %s\n",
              dir.string().c_str());
  return 0;
}

// -------------------------------------------------------------- characterize

int cmd_characterize(const GlobalArgs& g, const fs::path& kernel_path, int u,
                     std::vector<int> times) {
  ChannelKernel kernel = load_kernel(kernel_path);
  StationarityReport rep = stationarity_report(kernel);

  fs::path dir = ensure_out_dir(g);
  nlohmann::json doc;
  doc["eta"] = rep.eta;
  doc["guard"] = rep.guard;
  doc["dominant_modes_99"] = rep.dominant_modes_99;
  doc["energy_profile"] = nlohmann::json::array();
  for (Eigen::Index t = 0; t < rep.energy_profile.size(); ++t) {
    doc["energy_profile"].push_back(rep.energy_profile(t));
  }
  write_json(dir / "stationarity.json", doc);

  if (times.empty()) {
    // Default: four output times spread across the window.
    const int T = kernel.out_shape.num_times;
    times = {0, T / 4, T / 2, T - 1};
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
  }
  auto written = export_kernel_slices(kernel, u, times, dir);

  std::printf("wrote stationarity.json and %zu slice files to %s\n",
              written.size(), dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatio-temporal channel eigenmode toolkit"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--out-dir", g.out_dir, "directory for output files")
      ->capture_default_str();
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_value, "override the configured seed");
  CLI::Option* threads_opt =
      app.add_option("--threads", g.threads, "worker threads for simulation");
  app.fallthrough();

  fs::path spec_path;
  CLI::App* gen = app.add_subcommand("gen", "generate a channel kernel file");
  gen->add_option("--spec", spec_path, "kernel spec file (TOML)")->required();

  fs::path kernel_path;
  CLI::App* decompose =
      app.add_subcommand("decompose", "singular spectrum and eigenfunctions");
  decompose->add_option("--kernel", kernel_path, "kernel container file")
      ->required();

  fs::path pre_kernel, frame_path;
  double sigma_floor_rel = 1e-12;
  bool verify = false;
  CLI::App* precode =
      app.add_subcommand("precode", "zero-interference precoding of a frame");
  precode->add_option("--kernel", pre_kernel, "kernel container file")
      ->required();
  precode->add_option("--frame", frame_path, "target frame CSV")->required();
  precode->add_option("--sigma-floor-rel", sigma_floor_rel,
                      "relative inversion floor (0 disables)")
      ->capture_default_str();
  precode->add_flag("--verify", verify,
                    "re-apply the kernel and print the residual");

  fs::path ber_config;
  CLI::App* ber = app.add_subcommand("ber", "Monte-Carlo bit error sweep");
  ber->add_option("--config", ber_config, "link config file (TOML)")
      ->required();

  fs::path chr_kernel;
  int chr_u = 0;
  std::vector<int> chr_times;
  CLI::App* characterize =
      app.add_subcommand("characterize", "stationarity report and slices");
  characterize->add_option("--kernel", chr_kernel, "kernel container file")
      ->required();
  characterize->add_option("--u", chr_u, "output user index for slices")
      ->capture_default_str();
  characterize
      ->add_option("--times", chr_times, "output times for slices")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error_code:usage: %s\n", e.what());
    return 1;
  }

  if (seed_opt->count() > 0) {
    g.seed = seed_value;
  }
  g.threads = threads_opt->count() > 0 ? g.threads : 0;

  try {
    if (gen->parsed()) {
      return cmd_gen(g, spec_path);
    }
    if (decompose->parsed()) {
      return cmd_decompose(g, kernel_path);
    }
    if (precode->parsed()) {
      return cmd_precode(g, pre_kernel, frame_path, sigma_floor_rel, verify);
    }
    if (ber->parsed()) {
      return cmd_ber(g, ber_config);
    }
    if (characterize->parsed()) {
      return cmd_characterize(g, chr_kernel, chr_u, chr_times);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error_code:%s: %s\n", e.code().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error_code:internal: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "error_code:usage: no subcommand selected\n");
  return 1;
}
