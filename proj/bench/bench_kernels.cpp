// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "apnlc/kernels.hpp"
#include "apnlc/rng.hpp"

using namespace apnlc;
using namespace apnlc::kernels;

namespace {

std::vector<cplx> points(std::size_t n) {
  Rng rng(1);
  std::vector<cplx> p(n);
  for (auto& v : p) v = rng.complex_gaussian(1.0);
  return p;
}

template <bool Parallel>
void BM_ApSweep(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto p = points(n);
  std::vector<double> s(n * n), r(n * n, 0.0), a(n * n, 0.0), scratch(2 * n);
  similarity_serial(p, -1.0, {s.data(), n});
  for (auto _ : st) {
    if constexpr (Parallel)
      ap_sweep_parallel({s.data(), n}, {r.data(), n}, {a.data(), n}, 0.9, scratch);
    else
      ap_sweep_serial({s.data(), n}, {r.data(), n}, {a.data(), n}, 0.9, scratch);
    benchmark::DoNotOptimize(a.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n * n));
}

template <bool Parallel>
void BM_Similarity(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto p = points(n);
  std::vector<double> s(n * n);
  for (auto _ : st) {
    if constexpr (Parallel)
      similarity_parallel(p, -1.0, {s.data(), n});
    else
      similarity_serial(p, -1.0, {s.data(), n});
    benchmark::DoNotOptimize(s.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n * n));
}

template <bool Parallel>
void BM_AssignNearest(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto p = points(n);
  const auto c = points(16);
  std::vector<std::size_t> l(n);
  for (auto _ : st) {
    benchmark::DoNotOptimize(Parallel ? assign_nearest_parallel(p, c, l) : assign_nearest_serial(p, c, l));
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}

template <bool Parallel>
void BM_KerrPhase(benchmark::State& st) {
  auto f = points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel)
      kerr_phase_parallel(f, 1e-3);
    else
      kerr_phase_serial(f, 1e-3);
    benchmark::DoNotOptimize(f.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * st.range(0));
}

template <bool Parallel>
void BM_SpectralMultiply(benchmark::State& st) {
  auto f = points(static_cast<std::size_t>(st.range(0)));
  auto h = points(static_cast<std::size_t>(st.range(0)));
  for (auto& v : h) v /= std::abs(v);
  for (auto _ : st) {
    if constexpr (Parallel)
      spectral_multiply_parallel(f, h);
    else
      spectral_multiply_serial(f, h);
    benchmark::DoNotOptimize(f.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * st.range(0));
}

}  // namespace

BENCHMARK(BM_ApSweep<false>)->Name("ap_sweep/serial")->Arg(200)->Arg(400)->Arg(1000)->Arg(2000);
BENCHMARK(BM_ApSweep<true>)->Name("ap_sweep/parallel")->Arg(200)->Arg(400)->Arg(1000)->Arg(2000);
BENCHMARK(BM_Similarity<false>)->Name("similarity/serial")->Arg(400)->Arg(2000);
BENCHMARK(BM_Similarity<true>)->Name("similarity/parallel")->Arg(400)->Arg(2000);
BENCHMARK(BM_AssignNearest<false>)->Name("assign_nearest/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_AssignNearest<true>)->Name("assign_nearest/parallel")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_KerrPhase<false>)->Name("kerr_phase/serial")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_KerrPhase<true>)->Name("kerr_phase/parallel")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_SpectralMultiply<false>)->Name("spectral_multiply/serial")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_SpectralMultiply<true>)->Name("spectral_multiply/parallel")->Arg(1 << 14)->Arg(1 << 18);

BENCHMARK_MAIN();
