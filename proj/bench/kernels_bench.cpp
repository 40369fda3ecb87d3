#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "oriq/kernels.hpp"
#include "oriq/metrics.hpp"
#include "oriq/parallel.hpp"

using namespace oriq;
namespace k = oriq::kernels;

namespace {

struct Inputs {
    Plane ref = test::smooth_plane(3840, 1920);
    Plane test = test::add_noise(test::smooth_plane(3840, 1920, 0.01), 4, 1);
    Plane low = test::smooth_plane(1920, 960, 0.02);
    SpherePointSet pts{SpherePointSet::kDefaultCount};
    SphereSampler ref_s{pts, 3840, 1920};
    SphereSampler low_s{pts, 1920, 960};
    k::AxisTable tx = k::build_axis_table(1920, 3840, ResampleFilter::Lanczos3);
    k::AxisTable ty = k::build_axis_table(960, 1920, ResampleFilter::Lanczos3);
};

const Inputs& inputs() {
    static const Inputs in;
    return in;
}

// state.range(0): 0 = serial reference, otherwise OpenMP with that many threads
template <typename Serial, typename Omp>
void run(benchmark::State& state, Serial serial, Omp omp) {
    const int threads = int(state.range(0));
    if (threads > 0) set_thread_count(threads);
    for (auto _ : state) {
        if (threads == 0) benchmark::DoNotOptimize(serial());
        else benchmark::DoNotOptimize(omp());
    }
    set_thread_count(0);
}

void BM_Sse(benchmark::State& state) {
    const auto& in = inputs();
    run(state, [&] { return k::serial::sse(in.ref.samples, in.test.samples); },
        [&] { return k::omp::sse(in.ref.samples, in.test.samples); });
    state.SetItemsProcessed(state.iterations() * std::int64_t(in.ref.size()));
}

void BM_GatherSse(benchmark::State& state) {
    const auto& in = inputs();
    run(state, [&] { return k::serial::gather_sse(in.ref.samples, in.ref_s.nearest(), in.low.samples, in.low_s.nearest()); },
        [&] { return k::omp::gather_sse(in.ref.samples, in.ref_s.nearest(), in.low.samples, in.low_s.nearest()); });
    state.SetItemsProcessed(state.iterations() * std::int64_t(in.pts.size()));
}

void BM_BicubicSse(benchmark::State& state) {
    const auto& in = inputs();
    run(state, [&] { return k::serial::bicubic_sse(in.ref, in.ref_s.positions(), in.low, in.low_s.positions()); },
        [&] { return k::omp::bicubic_sse(in.ref, in.ref_s.positions(), in.low, in.low_s.positions()); });
    state.SetItemsProcessed(state.iterations() * std::int64_t(in.pts.size()));
}

void BM_ResampleLanczos(benchmark::State& state) {
    const auto& in = inputs();
    run(state, [&] { return k::serial::resample(in.low, in.tx, in.ty); },
        [&] { return k::omp::resample(in.low, in.tx, in.ty); });
    state.SetItemsProcessed(state.iterations() * std::int64_t(in.ref.size()));
}

void thread_args(benchmark::internal::Benchmark* b) {
    b->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_Sse)->Apply(thread_args);
BENCHMARK(BM_GatherSse)->Apply(thread_args);
BENCHMARK(BM_BicubicSse)->Apply(thread_args);
BENCHMARK(BM_ResampleLanczos)->Apply(thread_args);

BENCHMARK_MAIN();
