#include <string>

#include <benchmark/benchmark.h>

#include "lrcurves/blocks.hpp"
#include "lrcurves/curves.hpp"
#include "lrcurves/species.hpp"

namespace {

const lrc::SpeciesData& toy() {
  static const lrc::SpeciesData s =
      lrc::load_species(std::string(LRC_DATA_DIR) + "/cs2_cs_minimal.json");
  return s;
}

void bm_kernel_assembly(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  const auto blk =
      lrc::build_block(0, lrc::Parity::kEven, lrc::Reflection::kPlus, nmax);
  const auto rule =
      lrc::default_quadrature(lrc::default_omega_scale(toy()), 60);
  for (auto _ : state) {
    auto kern = lrc::build_kernels(blk, toy(), rule, nmax);
    benchmark::DoNotOptimize(kern.k6.data());
  }
  state.SetComplexityN(blk.size());
}
BENCHMARK(bm_kernel_assembly)->Arg(6)->Arg(10)->Arg(14)->Complexity();

void bm_eigensweep(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  const auto blk =
      lrc::build_block(0, lrc::Parity::kEven, lrc::Reflection::kPlus, nmax);
  const auto rule =
      lrc::default_quadrature(lrc::default_omega_scale(toy()), 60);
  const auto kern = lrc::build_kernels(blk, toy(), rule, nmax);
  const auto grid = lrc::log_grid(40.0, 500.0, 200);
  for (auto _ : state) {
    auto sweep = lrc::eigensweep(blk, kern, grid);
    benchmark::DoNotOptimize(sweep.energies.data());
  }
  state.SetComplexityN(blk.size());
}
BENCHMARK(bm_eigensweep)->Arg(6)->Arg(10)->Arg(14)->Complexity();

}  // namespace

BENCHMARK_MAIN();
