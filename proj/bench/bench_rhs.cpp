#include <map>
#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "giant/geometry.hpp"
#include "giant/lindblad.hpp"

using namespace giant;

namespace {

struct Fixture {
    LindbladGenerator gen;
    CompiledGenerator compiled;
    Mat rho;
};

// Chain of n three-level atoms at staggered frequencies, full 3^n space.
const Fixture& fixture(int n) {
    static std::map<int, Fixture> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const auto layout = preset_chain(n);
    const double w0 = layout.omega0;
    std::vector<double> f;
    for (int a = 0; a < n; ++a) f.push_back((0.17 + 0.031 * a) * w0);
    Fixture fx;
    fx.gen = build_generator(layout, uniform_specs(layout, -0.07 * w0, 0.3, 0.2), f, 0.2 * w0, nullptr);
    fx.compiled = CompiledGenerator::from(fx.gen);
    const Eigen::Index d = fx.gen.basis->dim();
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Mat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
    fx.rho = a * a.adjoint();
    fx.rho /= fx.rho.trace();
    return cache.emplace(n, std::move(fx)).first->second;
}

void BM_rhs_parallel(benchmark::State& state) {
    const auto& fx = fixture(static_cast<int>(state.range(0)));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    Mat out, scratch;
    for (auto _ : state) {
        lindblad_rhs(fx.compiled, fx.rho, out, scratch);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["dim"] = static_cast<double>(fx.rho.rows());
}

void BM_rhs_reference(benchmark::State& state) {
    const auto& fx = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Mat out = lindblad_rhs_reference(fx.gen, fx.rho);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["dim"] = static_cast<double>(fx.rho.rows());
}

}  // namespace

BENCHMARK(BM_rhs_parallel)->ArgsProduct({{2, 3, 4, 5}, {1, 2, 4}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_rhs_reference)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
