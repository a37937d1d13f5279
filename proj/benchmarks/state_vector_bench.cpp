#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qrl/gates/gate.hpp"
#include "qrl/qstate/state_vector.hpp"

namespace {

using qrl::qstate::StateVector;

void BM_SingleQubitGate(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    StateVector sv(n);
    const auto h = qrl::gates::builtin("H").matrix();
    std::size_t q = 0;
    for (auto _ : state) {
        const std::vector<std::size_t> target = {q};
        sv.apply(h, target);
        q = (q + 1) % n;
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_SingleQubitGate)->DenseRange(8, 20, 4);

void BM_ControlledGate(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    StateVector sv(n);
    const auto x = qrl::gates::builtin("X").matrix();
    const std::vector<std::size_t> target = {0};
    const std::vector<std::size_t> controls = {1, 2, 3};
    for (auto _ : state) {
        sv.apply(x, target, controls);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ControlledGate)->DenseRange(8, 20, 4);

void BM_MeasureRegister(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    qrl::qstate::SeededRng rng(1);
    const auto h = qrl::gates::builtin("H").matrix();
    std::vector<std::size_t> all(n);
    for (std::size_t q = 0; q < n; ++q) {
        all[q] = q;
    }
    for (auto _ : state) {
        state.PauseTiming();
        StateVector sv(n);
        for (std::size_t q = 0; q < n; ++q) {
            const std::vector<std::size_t> target = {q};
            sv.apply(h, target);
        }
        state.ResumeTiming();
        benchmark::DoNotOptimize(sv.measure(all, rng));
    }
}
BENCHMARK(BM_MeasureRegister)->DenseRange(8, 16, 4);

} // namespace
