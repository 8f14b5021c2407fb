#include <benchmark/benchmark.h>

#include "qve/instances.hpp"
#include "qve/linalg.hpp"
#include "qve/mc.hpp"
#include "qve/solvers.hpp"

using namespace qve;

namespace {

QveProblem make_problem(int n, double frac, std::uint64_t seed) {
    const double lc = instances::random_mbt_critical_lambda(n, seed);
    return instances::generate_random_mbt({instances::Family::random_mbt, n, frac * lc, seed});
}

void BM_eval_bilinear(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const QveProblem p = make_problem(n, 0.5, 0);
    const Vector x(static_cast<std::size_t>(n), 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(p.b().apply(x, x));
    state.SetComplexityN(n);
}
BENCHMARK(BM_eval_bilinear)->Arg(10)->Arg(20)->Arg(50)->Arg(100)->Complexity();

void BM_perron_right(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix r = make_problem(n, 0.5, 0).mean_matrix();
    for (auto _ : state) benchmark::DoNotOptimize(linalg::perron_right(r));
}
BENCHMARK(BM_perron_right)->Arg(10)->Arg(50)->Arg(100);

void BM_pseudo_inverse(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const QveProblem p = make_problem(n, 0.9, 0);
    Matrix h = solvers::survival_matrix(p, Vector(static_cast<std::size_t>(n), 0.5));
    const double rho = linalg::perron_right(h).value;
    for (int i = 0; i < n; ++i) h(i, i) -= rho;
    const Matrix id = Matrix::identity(n);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::pseudo_inverse_apply(h, id));
}
BENCHMARK(BM_pseudo_inverse)->Arg(10)->Arg(20)->Arg(50);

void BM_solver(benchmark::State& state, const char* name, double frac) {
    const QveProblem p = make_problem(20, frac, 0);
    for (auto _ : state) {
        const auto rep = solvers::solve_by_name(name, p);
        benchmark::DoNotOptimize(rep.iterations);
    }
}
BENCHMARK_CAPTURE(BM_solver, newton_far, "newton", 0.5);
BENCHMARK_CAPTURE(BM_solver, newton_near, "newton", 0.99);
BENCHMARK_CAPTURE(BM_solver, perron_far, "perron", 0.5);
BENCHMARK_CAPTURE(BM_solver, perron_near, "perron", 0.99);
BENCHMARK_CAPTURE(BM_solver, perron_newton_near, "perron-newton", 0.99);

void BM_mc_trials(benchmark::State& state) {
    const QveProblem p = instances::generate_scalar({instances::Family::scalar, 1, 0.25, 0});
    const long trials = state.range(0);
    for (auto _ : state) {
        const auto est = mc::estimate_extinction(p, {trials, 1000, 0, 0});
        benchmark::DoNotOptimize(est.estimate);
    }
    state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_mc_trials)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
