#include <benchmark/benchmark.h>

#include "psk/contact.hpp"
#include "psk/spectrum.hpp"
#include "psk/variation.hpp"

namespace {

using namespace psk;

void BM_JetEval(benchmark::State& state)
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    const ScalarExpr& e = S.phi[7]; // a representative composite entry
    const std::vector<double> p = {0.3, -0.2, 0.5, 0.1, -0.4};
    for (auto _ : state) {
        const Jet j = e.eval_jet(p);
        benchmark::DoNotOptimize(const_cast<double&>(j.v));
    }
}
BENCHMARK(BM_JetEval);

void BM_Christoffel(benchmark::State& state)
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    ExprMetricSource src(&S.metric);
    const std::vector<double> p = {0.3, -0.2, 0.5, 0.1, -0.4};
    for (auto _ : state) {
        ConnectionCoefficients g = christoffel(src, p);
        benchmark::DoNotOptimize(g.c.data());
    }
}
BENCHMARK(BM_Christoffel);

void BM_Riemann(benchmark::State& state)
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    ExprMetricSource src(&S.metric);
    const std::vector<double> p = {0.3, -0.2, 0.5, 0.1, -0.4};
    for (auto _ : state) {
        CurvatureTensor R = riemann(src, p);
        benchmark::DoNotOptimize(R.r.data());
    }
}
BENCHMARK(BM_Riemann)->Unit(benchmark::kMicrosecond);

void BM_Flow(benchmark::State& state)
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);
    const DeformationPotential pot{parse_expr("cos(u0)", {"u0"})};
    for (auto _ : state) {
        FlowResult fr = flow(geom, pot, 1e-2);
        benchmark::DoNotOptimize(fr.positions.data());
    }
}
BENCHMARK(BM_Flow)->Unit(benchmark::kMillisecond);

void BM_SpectrumCircle(benchmark::State& state)
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);
    SpectrumOptions opts;
    opts.resolution = {static_cast<int>(state.range(0))};
    opts.max_resolution = static_cast<int>(state.range(0)); // single solve
    for (auto _ : state) {
        SpectrumResult sp = laplace_spectrum(geom, opts);
        benchmark::DoNotOptimize(sp.eigenvalues.data());
    }
}
BENCHMARK(BM_SpectrumCircle)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
