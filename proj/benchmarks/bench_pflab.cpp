#include <memory>

#include <benchmark/benchmark.h>

#include "pflab/coupled_operator.hpp"
#include "pflab/eigensolver.hpp"

using namespace pflab;

namespace {

std::shared_ptr<const MatterOperator> atom(std::size_t n) {
  AtomModel m;
  m.grid = Grid1D(n, 60.0 / static_cast<double>(n));
  return std::make_shared<const MatterOperator>(build_atom(m));
}

CoupledOperator coupled(std::size_t n, std::size_t modes, Storage storage) {
  AssemblyOptions o;
  o.storage = storage;
  return assemble_length_gauge(atom(n), sample_continuum(0.01, 0.5, modes, 0.01),
                               {TruncationScheme::total_excitation, 2}, o);
}

void matvec(benchmark::State& state, Storage storage) {
  const CoupledOperator op = coupled(static_cast<std::size_t>(state.range(0)),
                                     static_cast<std::size_t>(state.range(1)), storage);
  const Vector x = Vector::Ones(static_cast<Eigen::Index>(op.dimension()));
  Vector y;
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dimension"] = static_cast<double>(op.dimension());
}

void BM_MatvecMaterialized(benchmark::State& state) { matvec(state, Storage::materialized); }
void BM_MatvecMatrixFree(benchmark::State& state) { matvec(state, Storage::matrix_free); }

void BM_GroundState(benchmark::State& state) {
  const CoupledOperator op = coupled(301, static_cast<std::size_t>(state.range(0)), Storage::automatic);
  SolverConfig cfg;
  cfg.reorthogonalization = state.range(1) ? Reorthogonalization::selective : Reorthogonalization::full;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(op, cfg).energy);
  state.counters["dimension"] = static_cast<double>(op.dimension());
}

void BM_FockBasis(benchmark::State& state) {
  for (auto _ : state) {
    const FockBasis b(static_cast<std::size_t>(state.range(0)), {TruncationScheme::total_excitation, 2});
    benchmark::DoNotOptimize(b.size());
  }
}

}  // namespace

BENCHMARK(BM_MatvecMaterialized)->Args({301, 4})->Args({301, 12})->Args({1000, 12})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecMatrixFree)->Args({301, 4})->Args({301, 12})->Args({1000, 12})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GroundState)->Args({4, 0})->Args({4, 1})->Args({8, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FockBasis)->Arg(12)->Arg(250)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
