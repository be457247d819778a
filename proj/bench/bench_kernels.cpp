// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... to
// pick a kernel; thread count follows UNIFORMITY_THREADS / OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "uniformity/numtheory.hpp"
#include "uniformity/parallel.hpp"
#include "uniformity/sequences.hpp"
#include "uniformity/spectral.hpp"
#include "uniformity/transport.hpp"

using namespace unif;

namespace {

PointSet kron2(std::uint64_t n) {
    return generate(SequenceSpec::parse("kronecker:d=2,alpha=auto"), 1, n);
}

void bm_exponential_sum_serial(benchmark::State& state) {
    const PointSet ps = kron2(static_cast<std::uint64_t>(state.range(0)));
    const std::array<long long, 2> k{5, -3};
    for (auto _ : state) benchmark::DoNotOptimize(exponential_sum_serial(ps, k));
}

void bm_exponential_sum_omp(benchmark::State& state) {
    const PointSet ps = kron2(static_cast<std::uint64_t>(state.range(0)));
    const std::array<long long, 2> k{5, -3};
    for (auto _ : state) benchmark::DoNotOptimize(exponential_sum(ps, k));
}

void bm_build_spectrum_serial(benchmark::State& state) {
    const PointSet ps = kron2(256);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_spectrum_serial(ps, static_cast<std::uint32_t>(state.range(0))));
}

void bm_build_spectrum_omp(benchmark::State& state) {
    const PointSet ps = kron2(256);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_spectrum(ps, static_cast<std::uint32_t>(state.range(0))));
}

void bm_lattice_sum_serial(benchmark::State& state) {
    const double t = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_lattice_sum_serial(0, 2, t, 1));
}

void bm_lattice_sum_omp(benchmark::State& state) {
    const double t = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_lattice_sum(0, 2, t, 1));
}

void bm_badness_scan_serial(benchmark::State& state) {
    const auto alpha = badly_approximable_alpha_frac(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            linear_form_badness_serial(alpha, static_cast<std::uint32_t>(state.range(0))));
}

void bm_badness_scan_omp(benchmark::State& state) {
    const auto alpha = badly_approximable_alpha_frac(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            linear_form_badness(alpha, static_cast<std::uint32_t>(state.range(0))));
}

void bm_semidiscrete_bracket(benchmark::State& state) {
    const auto mu = empirical_from_points(kron2(static_cast<std::uint64_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(w2_torus_bracket(mu, 64));
}

BENCHMARK(bm_exponential_sum_serial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_exponential_sum_omp)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_build_spectrum_serial)->Arg(16)->Arg(48);
BENCHMARK(bm_build_spectrum_omp)->Arg(16)->Arg(48);
BENCHMARK(bm_lattice_sum_serial)->Arg(1000)->Arg(10000);
BENCHMARK(bm_lattice_sum_omp)->Arg(1000)->Arg(10000);
BENCHMARK(bm_badness_scan_serial)->Arg(200)->Arg(1000);
BENCHMARK(bm_badness_scan_omp)->Arg(200)->Arg(1000);
BENCHMARK(bm_semidiscrete_bracket)->Arg(64)->Arg(256);

} // namespace

int main(int argc, char** argv) {
    apply_thread_env();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
