#include <benchmark/benchmark.h>

#include <vector>

#include "solitonlab/geometry.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/spacetime.hpp"

using namespace solitonlab;

namespace {

Point at() {
  Point p(4);
  p << 0.7, 0.2, -0.3, 0.5;
  return p;
}

MetricSpec grw() { return catalog_metric(FlatGrw{"t^2+1"}); }

}  // namespace

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(parse("exp(2*t)*sin(x)^2 + sqrt(t^2+y^2)/(1+z^2)", spacetime_coordinates()));
}
BENCHMARK(BM_Parse);

static void BM_Evaluate(benchmark::State& state) {
  const Expr e = parse("exp(2*t)*sin(x)^2 + sqrt(t^2+y^2)/(1+z^2)", spacetime_coordinates());
  const std::vector<double> p{0.7, 0.2, -0.3, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(e.evaluate(p));
}
BENCHMARK(BM_Evaluate);

static void BM_Christoffel(benchmark::State& state) {
  const MetricSpec m = grw();
  NumericsConfig cfg;
  cfg.richardson = state.range(0) != 0;
  const Point p = at();
  for (auto _ : state) benchmark::DoNotOptimize(christoffel(m, p, cfg));
}
BENCHMARK(BM_Christoffel)->Arg(0)->Arg(1);

static void BM_Curvature(benchmark::State& state) {
  const MetricSpec m = grw();
  const Point p = at();
  for (auto _ : state) benchmark::DoNotOptimize(curvature(m, p));
}
BENCHMARK(BM_Curvature);

static void BM_LambdaProjection(benchmark::State& state) {
  const MetricSpec m = catalog_metric(DeSitter{1.0});
  const auto& c = spacetime_coordinates();
  const VectorField xi = VectorField::from_components({parse("1", c), parse("0", c), parse("0", c), parse("0", c)});
  SolitonParams prm;
  const Point p = at();
  for (auto _ : state) benchmark::DoNotOptimize(lambda_from_projection(m, xi, prm, p));
}
BENCHMARK(BM_LambdaProjection);
BENCHMARK_MAIN();
