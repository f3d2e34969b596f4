#include <benchmark/benchmark.h>

#include "qmf/distribution.hpp"
#include "qmf/forms.hpp"

namespace {

void run_scan(benchmark::State& state, qmf::ExecPolicy policy) {
  qmf::FormParams p;
  p.a = qmf::Complex(0.5);
  const auto form = qmf::make_form("cotangent", p);
  const std::int64_t q = state.range(0);
  for (auto _ : state) {
    auto s = qmf::scan_form(*form, q, qmf::Normalization::q_pow_minus_k, policy);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * qmf::euler_phi(q));
}

void BM_ScanSerial(benchmark::State& state) { run_scan(state, qmf::ExecPolicy::serial); }
void BM_ScanParallel(benchmark::State& state) { run_scan(state, qmf::ExecPolicy::parallel); }

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(1009)->Arg(5003)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(1009)->Arg(5003)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
