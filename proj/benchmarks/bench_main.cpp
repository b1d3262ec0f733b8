#include <sketchpress/codec.hpp>
#include <sketchpress/datagen.hpp>
#include <sketchpress/power_iter.hpp>
#include <sketchpress/row_id.hpp>
#include <sketchpress/sketch.hpp>
#include <sketchpress/svd_sketch.hpp>

#include <benchmark/benchmark.h>

using namespace sketchpress;

namespace {

Matrix data(Index m, Index n) {
  SpectrumSpec s;
  s.m = m;
  s.n = n;
  s.decay = DecayKind::Power;
  s.seed = 1;
  return gen_spectrum_matrix(s);
}

SketchOperator sketch(SketchKind kind, Index n, Index nc) {
  SketchSpec s;
  s.kind = kind;
  s.n = n;
  s.n_c = nc;
  if (kind == SketchKind::NearestNeighbor) s.weights = default_neighbor_weights(1);
  return SketchOperator(s);
}

void BM_SketchApply(benchmark::State& state) {
  const auto kind = static_cast<SketchKind>(state.range(0));
  const Index n = 20000;
  const SketchOperator op = sketch(kind, n, n / 10);
  const RowBlock block = data(64, n);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(block));
  state.SetBytesProcessed(state.iterations() * block.size() * 8);
}
BENCHMARK(BM_SketchApply)->Arg(0)->Arg(1)->Arg(2);

void BM_SpcSvd(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = data(200, n);
  const SketchOperator op = sketch(SketchKind::GlobalAverage, n, n / 10);
  for (auto _ : state) {
    SnapshotStream s = SnapshotStream::from_matrix(a);
    benchmark::DoNotOptimize(spc_svd(s, op, 8));
  }
}
BENCHMARK(BM_SpcSvd)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_TpcSvd(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = data(200, n);
  const SketchOperator op = sketch(SketchKind::GlobalAverage, n, n / 10);
  for (auto _ : state) {
    SnapshotStream s = SnapshotStream::from_matrix(a);
    benchmark::DoNotOptimize(tpc_svd(s, op, 8));
  }
}
BENCHMARK(BM_TpcSvd)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SpcId(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = data(200, n);
  const SketchOperator op = sketch(SketchKind::DirectInjection, n, n / 10);
  for (auto _ : state) {
    SnapshotStream s = SnapshotStream::from_matrix(a);
    benchmark::DoNotOptimize(spc_id(s, op, 8));
  }
}
BENCHMARK(BM_SpcId)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SpcSvdPower(benchmark::State& state) {
  const Index n = 2000;
  const Matrix a = data(300, n);
  const SketchOperator op = compose_gaussian(sketch(SketchKind::DirectInjection, n, n / 10), 16, 3);
  PowerConfig cfg;
  cfg.q = state.range(0);
  for (auto _ : state) {
    SnapshotStream s = SnapshotStream::from_matrix(a);
    benchmark::DoNotOptimize(spc_svd_pwr(s, op, 8, cfg));
  }
}
BENCHMARK(BM_SpcSvdPower)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_RowId(benchmark::State& state) {
  const Matrix a = data(state.range(0), 400);
  for (auto _ : state) benchmark::DoNotOptimize(row_id(a, 10));
}
BENCHMARK(BM_RowId)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EncodeFactor(benchmark::State& state) {
  const Matrix c = data(8, 100000);
  FactorCodecParams p;
  p.mode = CodecMode::FixedPoint;
  p.bits = static_cast<int>(state.range(0));
  p.stage = state.range(1) ? LosslessStage::Deflate : LosslessStage::None;
  for (auto _ : state) benchmark::DoNotOptimize(encode_factor(c, p));
  state.SetBytesProcessed(state.iterations() * c.size() * 8);
}
BENCHMARK(BM_EncodeFactor)->Args({20, 0})->Args({20, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
