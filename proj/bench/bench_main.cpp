// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include "cganopt/cgan/generation.hpp"
#include "cganopt/cgan/label_grid.hpp"
#include "cganopt/cgan/trainer.hpp"
#include "cganopt/district/reference_model.hpp"
#include "cganopt/moo/nsga2.hpp"
#include "cganopt/moo/sorting.hpp"
#include "cganopt/nn/kernels.hpp"

using namespace cganopt;

namespace {

nn::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    Rng rng(seed);
    nn::Matrix m(r, c);
    for (auto& v : m.values()) v = rng.normal();
    return m;
}

template <bool Serial>
void BM_affine(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 128, 1);
    const auto b = random_matrix(128, 64, 2);
    const std::vector<double> bias(64, 0.1);
    for (auto _ : state) {
        auto out = Serial ? nn::kernels::serial::affine(a, b, bias) : nn::kernels::affine(a, b, bias);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * 128 * 64));
}

template <bool Serial>
void BM_matmul_tn(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 128, 3);
    const auto g = random_matrix(n, 64, 4);
    for (auto _ : state) {
        auto out = Serial ? nn::kernels::serial::matmul_tn(a, g) : nn::kernels::matmul_tn(a, g);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Serial>
void BM_matmul_nt(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto g = random_matrix(n, 64, 5);
    const auto w = random_matrix(128, 64, 6);
    for (auto _ : state) {
        auto out = Serial ? nn::kernels::serial::matmul_nt(g, w) : nn::kernels::matmul_nt(g, w);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Serial>
void BM_non_dominated_sort(benchmark::State& state) {
    Rng rng(7);
    std::vector<moo::MinVector> pts(static_cast<std::size_t>(state.range(0)));
    for (auto& p : pts)
        for (auto& v : p) v = rng.uniform();
    for (auto _ : state) {
        auto fronts = Serial ? moo::serial::non_dominated_sort(pts) : moo::non_dominated_sort(pts);
        benchmark::DoNotOptimize(fronts.data());
    }
}

template <bool Serial>
void BM_evaluate_population(benchmark::State& state) {
    static const auto model = district::ReferenceModel::load_default();
    const auto evaluate = moo::make_evaluator(model);
    Rng rng(8);
    std::vector<district::DecisionVector> ds(static_cast<std::size_t>(state.range(0)));
    for (auto& d : ds) {
        district::FieldArray f{};
        for (std::size_t i = 0; i < district::kFieldCount; ++i)
            f[i] = rng.uniform_int(district::kFieldBounds[i].lo, district::kFieldBounds[i].hi);
        d = district::DecisionVector::from_array(f);
    }
    for (auto _ : state) {
        auto out = Serial ? moo::serial::evaluate_population(ds, evaluate) : moo::evaluate_population(ds, evaluate);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Serial>
void BM_generate(benchmark::State& state) {
    cgan::CganConfig cfg;
    Rng rng(9);
    const auto g = cgan::build_generator(cfg, rng);
    const auto norm = cgan::NormalizationSpec::fit(std::vector<district::ObjectiveTriple>{{100, 1, 0}, {300, 3, 10}});
    const auto labels = cgan::build_label_grid(cgan::Experiment::full_data).labels;
    const cgan::GenerationRequest req{"bench", 1, cfg.latent_dim, static_cast<std::size_t>(state.range(0)), 1};
    for (auto _ : state) {
        auto out = Serial ? cgan::serial::generate(g, norm, labels, req) : cgan::generate(g, norm, labels, req);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_affine<true>)->Name("affine/serial")->Arg(64)->Arg(1024);
BENCHMARK(BM_affine<false>)->Name("affine/omp")->Arg(64)->Arg(1024);
BENCHMARK(BM_matmul_tn<true>)->Name("matmul_tn/serial")->Arg(64)->Arg(1024);
BENCHMARK(BM_matmul_tn<false>)->Name("matmul_tn/omp")->Arg(64)->Arg(1024);
BENCHMARK(BM_matmul_nt<true>)->Name("matmul_nt/serial")->Arg(64)->Arg(1024);
BENCHMARK(BM_matmul_nt<false>)->Name("matmul_nt/omp")->Arg(64)->Arg(1024);
BENCHMARK(BM_non_dominated_sort<true>)->Name("non_dominated_sort/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_non_dominated_sort<false>)->Name("non_dominated_sort/omp")->Arg(256)->Arg(1024);
BENCHMARK(BM_evaluate_population<true>)->Name("evaluate_population/serial")->Arg(128)->Arg(1024);
BENCHMARK(BM_evaluate_population<false>)->Name("evaluate_population/omp")->Arg(128)->Arg(1024);
BENCHMARK(BM_generate<true>)->Name("generate/serial")->Arg(1)->Arg(10);
BENCHMARK(BM_generate<false>)->Name("generate/omp")->Arg(1)->Arg(10);

BENCHMARK_MAIN();
