#include "ppir/audit.hpp"
#include "ppir/fixtures.hpp"
#include "ppir/io.hpp"
#include "ppir/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace ppir;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Symbol> pick(0, q - 1);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = pick(rng);
  return m;
}

// parity block of a [2G - 1, G] code applied to L symbol positions
template <Matrix (*Combine)(const Matrix&, const Matrix&, const PrimeField&)>
void combine(benchmark::State& state) {
  const PrimeField f(2'147'483'647);
  const std::size_t gamma = 16;
  const auto length = static_cast<std::size_t>(state.range(0));
  const Matrix coeffs = random_matrix(gamma, gamma - 1, f.order(), 1);
  const Matrix data = random_matrix(gamma, length, f.order(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(Combine(coeffs, data, f));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * length));
}

template <Census (*Run)(const Scenario&, Mode, std::size_t, std::uint64_t)>
void census(benchmark::State& state) {
  const Scenario s = parse_scenario(fixture_text("two_user_gf13"));
  const auto runs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Run(s, Mode::multi, runs, 5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * runs * 49));
}

BENCHMARK(combine<kernels::combine_serial>)->Name("combine_serial")->Arg(1 << 10)->Arg(1 << 16);
BENCHMARK(combine<kernels::combine_parallel>)->Name("combine_parallel")->Arg(1 << 10)->Arg(1 << 16);
BENCHMARK(census<non_repetition_census_serial>)->Name("census_serial")->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(census<non_repetition_census_parallel>)->Name("census_parallel")->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
