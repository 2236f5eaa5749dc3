// Serial reference kernels against their OpenMP versions.
// Thread count follows QFILAB_THREADS; on one core the pairs should tie.
#include "qfilab/bounds.hpp"
#include "qfilab/channels.hpp"
#include "qfilab/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace qfl;

namespace {

template <bool Parallel>
void BM_PartialTrace(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::vector<int> dims(n, 2), keep;
  for (int i = 0; i < n / 2; ++i) keep.push_back(2 * i);
  Mat rho = random_density(1 << n, 4, 1);
  for (auto _ : st) {
    Mat r = Parallel ? kernels::partial_trace_parallel(rho, dims, keep) : kernels::partial_trace_serial(rho, dims, keep);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_KrausApply(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  KrausChannel ch = random_channel(d, d, 16, 2);
  Mat rho = random_density(d, d, 3);
  for (auto _ : st) {
    Mat r = Parallel ? kernels::kraus_apply_parallel(ch.kraus(), rho) : kernels::kraus_apply_serial(ch.kraus(), rho);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_PinchSum(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  KrausChannel ad = amplitude_damping(0.1);
  std::vector<Mat> Q;
  for (const auto& E : ad.kraus()) Q.push_back(E.adjoint() * E);
  auto strings = strings_up_to_weight(n, 2, n);
  Vec psi = random_unit_vector(1 << n, 4), h = random_unit_vector(1 << n, 5);
  for (auto _ : st) {
    kernels::PinchTerms t = Parallel ? kernels::pinch_sum_parallel(psi, h, n, Q, strings)
                                     : kernels::pinch_sum_serial(psi, h, n, Q, strings);
    benchmark::DoNotOptimize(t.sum);
  }
  st.counters["strings"] = static_cast<double>(strings.size());
}

}  // namespace

BENCHMARK(BM_PartialTrace<false>)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartialTrace<true>)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KrausApply<false>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KrausApply<true>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinchSum<false>)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinchSum<true>)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
