#include <benchmark/benchmark.h>

#include "intcpx/complexity.hpp"
#include "intcpx/defect.hpp"
#include "intcpx/represent.hpp"

using namespace intcpx;

namespace {

const ComplexityTable& shared_table() {
  static const ComplexityTable t = ComplexityTable::build(1 << 20);
  return t;
}

void BM_BuildTable(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    ComplexityTable t = ComplexityTable::build(limit);
    benchmark::DoNotOptimize(t.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(limit));
}
BENCHMARK(BM_BuildTable)->Arg(1 << 14)->Arg(1 << 17)->Arg(1 << 20)
    ->Unit(benchmark::kMillisecond);

void BM_SingleValueAboveTable(benchmark::State& state) {
  const ComplexityTable small = ComplexityTable::build(10000);
  std::uint64_t n = 1 << 20;
  for (auto _ : state) {
    // Fresh oracle per pass: measures the cold search, not the memo.
    ComplexityOracle oracle(small);
    benchmark::DoNotOptimize(oracle(n));
    n += 2;
  }
}
BENCHMARK(BM_SingleValueAboveTable);

void BM_LadderScan(benchmark::State& state) {
  const ComplexityOracle oracle(shared_table());
  for (auto _ : state) {
    std::uint64_t m = 107;
    unsigned c = oracle(m);
    for (int k = 0; k < 12; ++k) {
      m *= 3;
      c = oracle.bounded(m, c + 3);
    }
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_LadderScan);

void BM_DefectCompare(benchmark::State& state) {
  const ComplexityTable& t = shared_table();
  const ExactDefect d1 = defect_of(2188, t);
  const ExactDefect d2 = defect_of(1094, t);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d1.compare(d2));
  }
}
BENCHMARK(BM_DefectCompare);

void BM_FindRepresentations(benchmark::State& state) {
  const LowDefectPoly f =
      LowDefectExpression::parse("(2*x1+1)*(3*x2+1)*x3+1").to_poly();
  const mpz_class target = f.evaluate(std::vector<unsigned>{5, 4, 6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_representations(f, target, false));
  }
}
BENCHMARK(BM_FindRepresentations);

}  // namespace

BENCHMARK_MAIN();
