#include <complex>
#include <random>

#include <benchmark/benchmark.h>

#include "qrl/gates/gate.hpp"
#include "qrl/gates/synthesis.hpp"
#include "qrl/gates/zyz.hpp"

namespace {

// Random U(2) from Euler angles; good enough as benchmark input.
qrl::Matrix random_unitary(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    return qrl::gates::global_phase(angle(rng)) * qrl::gates::rot_z(angle(rng)) *
           qrl::gates::rot_y(angle(rng)) * qrl::gates::rot_z(angle(rng));
}

void BM_ZyzDecompose(benchmark::State &state) {
    std::mt19937_64 rng(3);
    std::vector<qrl::Matrix> inputs;
    for (int i = 0; i < 64; ++i) {
        inputs.push_back(random_unitary(rng));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrl::gates::zyz_decompose(inputs[i++ % inputs.size()]));
    }
}
BENCHMARK(BM_ZyzDecompose);

void BM_SynthesizeMultiControlled(benchmark::State &state) {
    std::mt19937_64 rng(4);
    const qrl::gates::Gate g("u", random_unitary(rng));
    const auto n_controls = static_cast<std::size_t>(state.range(0));
    std::size_t steps = 0;
    for (auto _ : state) {
        const auto seq = qrl::gates::synthesize_multi_controlled(g, n_controls);
        steps = seq.steps.size();
        benchmark::DoNotOptimize(steps);
    }
    state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_SynthesizeMultiControlled)->DenseRange(1, 9, 2);

void BM_QftSequence(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrl::gates::qft_sequence(n));
    }
}
BENCHMARK(BM_QftSequence)->DenseRange(4, 16, 4);

} // namespace
