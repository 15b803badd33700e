#include <benchmark/benchmark.h>

#include "iontopo/dynamics.hpp"
#include "iontopo/topology.hpp"

using namespace iontopo;

namespace {

ModelParams params() {
  ModelParams p;
  p.beta_x = 0.04;
  p.v_b = -0.1;
  return p;
}

Lattice hexagon(int n) {
  LatticeOptions o;
  o.plane_shape = PlaneShape::Hexagon;
  return build_lattice(Geometry::Plane, n, n, o);
}

const BlochModel& primitive() {
  static const Lattice lat = build_lattice(Geometry::Torus, 1, 1);
  static const BlochModel model(lat, coulomb_coupling(lat));
  return model;
}

}  // namespace

static void BM_CoulombCoupling(benchmark::State& state) {
  const Lattice lat = hexagon(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coulomb_coupling(lat));
  state.SetLabel(std::to_string(lat.size()) + " sites");
}
BENCHMARK(BM_CoulombCoupling)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PlaneEigensolve(benchmark::State& state) {
  const Lattice lat = hexagon(static_cast<int>(state.range(0)));
  const HamiltonianMatrix h = assemble_real_space(lat, params(), coulomb_coupling(lat));
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve(h));
  state.SetLabel("dim " + std::to_string(h.dim()));
}
BENCHMARK(BM_PlaneEigensolve)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BlochGrid(benchmark::State& state) {
  BandOptions o;
  o.grid_n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(band_structure(primitive(), params(), o));
}
BENCHMARK(BM_BlochGrid)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_ChernNumbers(benchmark::State& state) {
  ChernOptions o;
  o.grid_n = static_cast<int>(state.range(0));
  o.auto_refine = false;
  for (auto _ : state) benchmark::DoNotOptimize(band_chern_numbers(primitive(), params(), o));
}
BENCHMARK(BM_ChernNumbers)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_FlatnessMap(benchmark::State& state) {
  FlatnessMapSpec spec;
  spec.v_b_points = spec.beta_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(flatness_map(spec));
}
BENCHMARK(BM_FlatnessMap)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_DriveResponse(benchmark::State& state) {
  const Lattice lat = hexagon(8);
  const Spectrum s = eigensolve(assemble_real_space(lat, params(), coulomb_coupling(lat)));
  DriveSpec d;
  d.omega_d = 0.7;
  for (auto _ : state) benchmark::DoNotOptimize(drive_response(s, d));
}
BENCHMARK(BM_DriveResponse)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
