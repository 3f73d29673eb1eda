#include <benchmark/benchmark.h>

#include <numbers>

#include "cgabor/bargmann.hpp"
#include "cgabor/gabor.hpp"
#include "cgabor/robotics.hpp"

using namespace cgabor;

namespace {

constexpr double pi = std::numbers::pi;

const RiemannianChart& torus2() {
  static const auto c = RiemannianChart::flat_torus(Vec::Ones(2));
  return c;
}

void BM_OutputEvaluatorBuild(benchmark::State& state) {
  const auto f = half_space_signal(Eigen::Vector2d(1, 0), pi);
  OutputParams p;
  p.fiber_nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    OutputEvaluator ev(torus2(), f, {Eigen::Vector2d(pi, 2.0)}, WindowSpec::scalar(2, 1.0), p);
    benchmark::DoNotOptimize(ev.magnitude_scale());
  }
}
BENCHMARK(BM_OutputEvaluatorBuild)->Arg(31)->Arg(61)->Arg(121)->Unit(benchmark::kMicrosecond);

void BM_DetectBoundaryNormal(benchmark::State& state) {
  const auto f = half_space_signal(Eigen::Vector2d(1, 0), pi);
  DetectionParams p;
  p.sphere_resolution = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        detect_boundary_normal(torus2(), f, {Eigen::Vector2d(pi, 2.0)}, WindowSpec::scalar(2, 1.0), p).angle);
}
BENCHMARK(BM_DetectBoundaryNormal)->Arg(180)->Arg(720)->Unit(benchmark::kMillisecond);

void BM_FrameBounds1D(benchmark::State& state) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(1));
  const auto frame = build_contact_frame(chart, make_cosphere_point(chart, {Vec::Zero(1)}, Vec::Ones(1)),
                                         RotationStructure{});
  const LatticeSpec spec{LatticeVariant::reeb, Vec::Constant(1, 0.7), Vec::Constant(1, 0.7), 0};
  const auto lf = build_lattice_frame(frame, spec);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frame_bounds_at(WindowSpec::standard(1), lf, K).A_est);
}
BENCHMARK(BM_FrameBounds1D)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_BargmannTransform(benchmark::State& state) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(1));
  const auto m = make_cosphere_point(chart, {Vec::Zero(1)}, Vec::Ones(1));
  const CutoffSpec cut{pi, 0.25};
  const auto fg = make_fiber_grid(chart, m.b, cut, static_cast<int>(state.range(0)));
  CVec f(fg.grid.size());
  for (std::int64_t k = 0; k < fg.grid.size(); ++k) f(k) = std::exp(-fg.grid.node(k).squaredNorm());
  const Mat A = pi * Mat::Identity(1, 1);
  const auto zg = make_z_grid(1);
  for (auto _ : state) benchmark::DoNotOptimize(bargmann_transform(f, fg, A, zg).sum());
}
BENCHMARK(BM_BargmannTransform)->Arg(61)->Arg(121)->Unit(benchmark::kMillisecond);

void BM_ArmPipeline(benchmark::State& state) {
  const auto chart = arm_config_space({Eigen::Vector2d(1, 1)});
  const auto band = anti_diagonal_band(0.3);
  const auto probes = band_edge_probes(0.3, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(boundary_map_pipeline(chart, band, probes, WindowSpec::standard(2)).size());
}
BENCHMARK(BM_ArmPipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
