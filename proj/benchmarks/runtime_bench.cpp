#include <string>

#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include "qrl/frontend/parser.hpp"
#include "qrl/runtime/interpreter.hpp"
#include "qrl/typecheck/checker.hpp"

namespace {

const char *kQft = R"(
operator qft(qureg a) {
  int i;
  int j;
  int d;
  d = #a;
  for i = d-1 to 0 step -1 {
    for j = d-1 to i+1 step -1 {
      CPhase(pi / 2^(j-i), a[j] & a[i]);
    }
    H(a[i]);
  }
  for j = 0 to d/2 - 1 {
    Swap(a[j], a[d-1-j]);
  }
}
)";

void BM_ParseAndCheck(benchmark::State &state) {
    for (auto _ : state) {
        auto program = qrl::frontend::parse_source(kQft);
        qrl::typecheck::Checker checker;
        benchmark::DoNotOptimize(checker.check(program));
    }
}
BENCHMARK(BM_ParseAndCheck);

void BM_InterpretQft(benchmark::State &state) {
    const auto n = state.range(0);
    auto program = qrl::frontend::parse_source(std::string(kQft) + fmt::format("qureg a[{}];\nqft(a);\n", n));
    qrl::typecheck::Checker checker;
    checker.check(program);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrl::runtime::run(program));
    }
}
BENCHMARK(BM_InterpretQft)->DenseRange(4, 16, 4);

void BM_ChannelPingPong(benchmark::State &state) {
    const auto rounds = state.range(0);
    auto program = qrl::frontend::parse_source(fmt::format(R"(
void echo(channelEnd[int] e) {{
  int i;
  int v;
  for i = 1 to {0} {{
    v = recv(e);
    send (e, v + 1);
  }}
}}
void main() {{
  channel[int] c withends [c0, c1];
  int i;
  int v;
  v = 0;
  fork echo(c1);
  for i = 1 to {0} {{
    send (c0, v);
    v = recv(c0);
  }}
}}
)",
                                                           rounds));
    qrl::typecheck::Checker checker;
    checker.check(program);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrl::runtime::run(program));
    }
    state.SetItemsProcessed(state.iterations() * rounds * 2);
}
BENCHMARK(BM_ChannelPingPong)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
