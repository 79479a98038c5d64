// Serial vs OpenMP elimination vs the dense reference on random sparse systems.
#include <benchmark/benchmark.h>

#include "pw/exactlin.hpp"

#include <random>

namespace {

using IntRows = std::vector<std::vector<std::pair<std::size_t, pw::Integer>>>;

IntRows random_rows(std::size_t n, std::size_t cols, int density_pct, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> pct(0, 99);
    IntRows rows(n);
    for (auto& r : rows)
        for (std::size_t j = 0; j < cols; ++j)
            if (pct(rng) < density_pct) {
                int c = coef(rng);
                if (c != 0) r.emplace_back(j, c);
            }
    return rows;
}

pw::SparseMatrix to_matrix(const IntRows& rows, std::size_t cols)
{
    std::vector<pw::SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, c] : rows[i]) t.push_back({i, j, pw::Rational(c)});
    return {rows.size(), cols, t};
}

void BM_eliminate(benchmark::State& state, pw::Exec exec)
{
    auto n = static_cast<std::size_t>(state.range(0));
    auto rows = random_rows(n, n, 8, 42);
    for (auto _ : state) benchmark::DoNotOptimize(pw::eliminate(rows, n, exec));
}

void BM_reference(benchmark::State& state)
{
    auto n = static_cast<std::size_t>(state.range(0));
    auto m = to_matrix(random_rows(n, n, 8, 42), n);
    for (auto _ : state) benchmark::DoNotOptimize(pw::reference::rank(m));
}

}  // namespace

BENCHMARK_CAPTURE(BM_eliminate, serial, pw::Exec::serial)->Arg(40)->Arg(80)->Arg(160);
BENCHMARK_CAPTURE(BM_eliminate, parallel, pw::Exec::parallel)->Arg(40)->Arg(80)->Arg(160);
BENCHMARK(BM_reference)->Arg(40)->Arg(80);

BENCHMARK_MAIN();
