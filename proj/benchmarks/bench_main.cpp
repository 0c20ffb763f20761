#include <benchmark/benchmark.h>

#include <numbers>

#include "cli/fixtures.hpp"

using namespace dkpair;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_Flatten(benchmark::State& st) {
  const TorusGrid g = TorusGrid::momentum(2, static_cast<int>(st.range(0)));
  const AlgElement h = spin_double(qwz(1.0)).symbol(g);
  for (auto _ : st) benchmark::DoNotOptimize(flatten(h));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.points()));
}
BENCHMARK(BM_Flatten)->Arg(16)->Arg(32)->Arg(64);

void BM_PairCh2(benchmark::State& st) {
  const TorusGrid g = TorusGrid::momentum(2, static_cast<int>(st.range(0)));
  const OsuElement x = make_osu_from_hamiltonian(qwz(1.0).symbol(g));
  const BasePoint e = BasePoint::standard_rho(g, 2);
  for (auto _ : st) benchmark::DoNotOptimize(pair(ch2(), x, e));
}
BENCHMARK(BM_PairCh2)->Arg(16)->Arg(32)->Arg(64);

void BM_TorsionLoop(benchmark::State& st) {
  const fixtures::KaneMeleExample km = fixtures::kane_mele_decoupled(16);
  const OsuElement x = osu_validate(km.x);
  const BasePoint e = BasePoint::custom(km.e);
  const int nodes = static_cast<int>(st.range(0));
  for (auto _ : st) {
    const LoopElement L = torsion_loop(x, e, km.y, nodes, &km.rs);
    benchmark::DoNotOptimize(torsion_pairing_via_loop(ch2(), L, km.e.lift(2), kane_mele_modulus()));
  }
}
BENCHMARK(BM_TorsionLoop)->Arg(9)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_FloquetInvariant(benchmark::State& st) {
  const TorusGrid g = TorusGrid::momentum(2, static_cast<int>(st.range(0)));
  const FloquetDrive d = fixtures::undriven(spin_double(qwz(1.0)).symbol(g), 0.5);
  FloquetOptions o;
  o.nodes = 64;
  for (auto _ : st) benchmark::DoNotOptimize(kane_mele_floquet_invariant(d, 0.0, kPi, o));
}
BENCHMARK(BM_FloquetInvariant)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
