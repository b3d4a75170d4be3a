#include <benchmark/benchmark.h>

#include <limits>

#include "hogmt/channel.hpp"
#include "hogmt/characterize.hpp"
#include "hogmt/decompose.hpp"
#include "hogmt/link.hpp"
#include "hogmt/modulation.hpp"
#include "hogmt/precode.hpp"
#include "hogmt/rng.hpp"

using namespace hogmt;

namespace {

ChannelKernel bench_kernel(int nu, int t) {
  return gen_random(make_grid(nu, t), 42);
}

void BM_decompose(benchmark::State& state) {
  const int nu = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  ChannelKernel k = bench_kernel(nu, t);
  for (auto _ : state) {
    EigenSystem sys = decompose_4d(k);
    benchmark::DoNotOptimize(sys.sigmas.data());
  }
  state.SetComplexityN(k.out_shape.size());
}
BENCHMARK(BM_decompose)
    ->Args({2, 16})
    ->Args({4, 32})
    ->Args({4, 64})
    ->Unit(benchmark::kMillisecond);

void BM_precode_reuse(benchmark::State& state) {
  const int nu = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  ChannelKernel k = bench_kernel(nu, t);
  EigenSystem sys = decompose_4d(k);
  SplitMix64 rng(7);
  Eigen::VectorXcd v(k.out_shape.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = rng.next_complex_gaussian();
  }
  SymbolFrame s{k.out_shape, v};
  PrecoderConfig cfg;
  for (auto _ : state) {
    PrecodeResult res = precode_with(sys, s, cfg);
    benchmark::DoNotOptimize(res.x.data.data());
  }
}
BENCHMARK(BM_precode_reuse)
    ->Args({2, 16})
    ->Args({4, 32})
    ->Args({4, 64})
    ->Unit(benchmark::kMicrosecond);

void BM_apply_kernel(benchmark::State& state) {
  const int nu = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  ChannelKernel k = bench_kernel(nu, t);
  SymbolFrame x = zero_frame(k.in_shape);
  x.data.setOnes();
  for (auto _ : state) {
    SymbolFrame r = apply_kernel(k, x);
    benchmark::DoNotOptimize(r.data.data());
  }
}
BENCHMARK(BM_apply_kernel)
    ->Args({4, 32})
    ->Args({4, 64})
    ->Unit(benchmark::kMicrosecond);

void BM_modem_roundtrip(benchmark::State& state) {
  const GridShape g = make_grid(4, 64);
  const ModScheme scheme = static_cast<ModScheme>(state.range(0));
  SplitMix64 rng(3);
  BitVec bits(static_cast<std::size_t>(g.size() * bits_per_symbol(scheme)));
  for (auto& b : bits) {
    b = static_cast<std::uint8_t>(rng.next() >> 63);
  }
  for (auto _ : state) {
    SymbolFrame f = modulate(bits, scheme, g);
    BitVec back = demodulate(f, scheme);
    benchmark::DoNotOptimize(back.data());
  }
}
BENCHMARK(BM_modem_roundtrip)
    ->Arg(static_cast<int>(ModScheme::qpsk))
    ->Arg(static_cast<int>(ModScheme::qam64))
    ->Unit(benchmark::kMicrosecond);

void BM_gen_nonstationary(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  std::vector<DriftingTap> taps(3);
  taps[0].base_delay = 0;
  taps[0].doppler = 0.005;
  taps[0].leakage = 0.2;
  taps[1].base_delay = 1;
  taps[1].delay_drift = 0.015;
  taps[1].gain = 0.25;
  taps[1].leakage = 0.3;
  taps[2].base_delay = 2;
  taps[2].doppler = 0.029;
  taps[2].gain = 0.15;
  NsChannelSpec spec = make_drifting_spec(make_grid(4, t), taps, 1);
  for (auto _ : state) {
    ChannelKernel k = gen_nonstationary(spec);
    benchmark::DoNotOptimize(k.data.data());
  }
}
BENCHMARK(BM_gen_nonstationary)->Arg(32)->Arg(64)->Arg(128)->Unit(
    benchmark::kMicrosecond);

void BM_time_correlation(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  ChannelKernel k = bench_kernel(4, t);
  for (auto _ : state) {
    Eigen::MatrixXcd r = time_correlation(k);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_time_correlation)->Arg(32)->Arg(64)->Unit(
    benchmark::kMillisecond);

void BM_link_point(benchmark::State& state) {
  LinkConfig cfg;
  cfg.kernel = bench_kernel(4, 32);
  cfg.scheme = ModScheme::qpsk;
  cfg.snr_db_points = {10.0};
  cfg.trials_per_point = 16;
  cfg.precoding = Precoding::spatio_temporal;
  cfg.seed = 5;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    LinkReport rep = run_link(cfg);
    benchmark::DoNotOptimize(rep.points.data());
  }
}
BENCHMARK(BM_link_point)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
