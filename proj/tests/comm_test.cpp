#include <random>
#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "qrl/comm/scheduler.hpp"
#include "qrl/error.hpp"
#include "qrl/frontend/parser.hpp"
#include "qrl/runtime/interpreter.hpp"
#include "qrl/typecheck/checker.hpp"
#include "support/programs.hpp"

namespace qrl::comm {
namespace {

using runtime::RunConfig;
using runtime::RunReport;

frontend::Node checked(const std::string &source) {
    frontend::Node program = frontend::parse_source(source);
    typecheck::Checker checker;
    const auto diags = checker.check(program);
    std::string text;
    for (const auto &d : diags) {
        text += typecheck::render(d, "generated") + "\n";
    }
    EXPECT_FALSE(typecheck::has_errors(diags)) << source << text;
    return program;
}

TEST(Scheduler, RootRunsAloneWithoutThreads) {
    Scheduler s;
    int hits = 0;
    s.run([&] { ++hits; });
    EXPECT_EQ(hits, 1);
    EXPECT_EQ(s.processes().size(), 1u);
}

TEST(Scheduler, RendezvousDeliversInOrder) {
    Scheduler s;
    std::vector<std::int64_t> got;
    s.run([&] {
        const std::size_t c = s.create_channel("c", frontend::TypeBase::Int);
        s.give_end({c, 0}, s.spawn("producer", [&s, c] {
            for (int i = 0; i < 5; ++i) {
                s.send({c, 0}, runtime::Value{runtime::Int(i)});
            }
        }));
        for (int i = 0; i < 5; ++i) {
            got.push_back(runtime::to_int64(s.recv({c, 1})));
        }
    });
    EXPECT_EQ(got, (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
}

TEST(Scheduler, CrossedReceivesDeadlockNamingBothProcesses) {
    const auto program = checked(R"(
void a(channelEnd[int] x, channelEnd[int] y) { int v; v = recv(x); send (y, 1); }
void b(channelEnd[int] x, channelEnd[int] y) { int v; v = recv(x); send (y, 2); }
void main() {
  channel[int] p withends [p0, p1];
  channel[int] q withends [q0, q1];
  fork a(p0, q0);
  fork b(q1, p1);
}
)");
    const RunReport r = runtime::run(program);
    EXPECT_EQ(r.exit_status, 2);
    EXPECT_EQ(r.fault_kind, ErrorKind::ChannelDeadlock);
    EXPECT_NE(r.fault.find("pid=1 (a)"), std::string::npos) << r.fault;
    EXPECT_NE(r.fault.find("pid=2 (b)"), std::string::npos) << r.fault;
}

TEST(Scheduler, SendWithoutReceiverDeadlocks) {
    const auto program = checked(R"(
void main() {
  channel[int] c withends [c0, c1];
  send (c0, 3);
}
)");
    const RunReport r = runtime::run(program);
    EXPECT_EQ(r.exit_status, 2);
    EXPECT_EQ(r.fault_kind, ErrorKind::ChannelDeadlock);
}

TEST(Scheduler, ForkingAQubitTwiceIsAnOwnershipFault) {
    // Parsed without checking so that the runtime guard is what fires.
    const auto program = testing::parse_unchecked(R"(
void w(qbit q) { H(q); }
void main() {
  qbit a;
  fork w(a);
  fork w(a);
}
)");
    const RunReport r = runtime::run(program);
    EXPECT_EQ(r.exit_status, 2);
    EXPECT_EQ(r.fault_kind, ErrorKind::OwnershipViolation);
}

TEST(Scheduler, GatingASentQubitIsAnOwnershipFault) {
    const auto program = testing::parse_unchecked(R"(
module A {
  new qbit x := 0;
  send x to B;
  x *= H;
};
module B {
  receive y:qbit from A;
};
)");
    const RunReport r = runtime::run(program);
    EXPECT_EQ(r.exit_status, 2);
    EXPECT_EQ(r.fault_kind, ErrorKind::OwnershipViolation);
}

TEST(Scheduler, TraceRecordsForkAndMessages) {
    const auto program = checked(R"(
void w(channelEnd[int] e) { send (e, 5); }
void main() {
  channel[int] c withends [c0, c1];
  int v;
  fork w(c0);
  v = recv(c1);
  print v;
}
)");
    RunConfig config;
    config.trace = true;
    const RunReport r = runtime::run(program, config);
    EXPECT_EQ(r.output, "5\n");
    ASSERT_FALSE(r.trace.empty());
    EXPECT_EQ(r.trace.front(), "pid=0 fork w -> pid=1");
    EXPECT_NE(std::find(r.trace.begin(), r.trace.end(), "pid=1 done"), r.trace.end());
}

TEST(Scheduler, BellPairsAreCorrelatedAcrossProcesses) {
    const auto program = checked(R"(
void bob(channelEnd[int] e, qbit q) { int m; m = measure q; send (e, m); }
void main() {
  channel[int] c withends [c0, c1];
  qbit a, b;
  int ma;
  int mb;
  H(a);
  CNot(b, a);
  fork bob(c0, b);
  ma = measure a;
  mb = recv(c1);
  print ma, mb;
}
)");
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RunConfig config;
        config.seed = seed;
        const RunReport r = runtime::run(program, config);
        ASSERT_EQ(r.exit_status, 0) << r.fault;
        ASSERT_TRUE(r.output == "0 0\n" || r.output == "1 1\n") << r.output;
        ones += r.output == "1 1\n";
    }
    EXPECT_GT(ones, 400);
    EXPECT_LT(ones, 600);
}

// Property suites.

TEST(SchedulerProperty, OwnershipPartitionsAllocatedQubits) {
    std::mt19937_64 rng(21);
    for (int c = 0; c < 200; ++c) {
        const std::string source = testing::random_comm_program(rng);
        const auto program = checked(source);
        RunConfig config;
        config.seed = c;
        runtime::Interpreter interp(config);
        Scheduler &sched = interp.scheduler();
        std::size_t steps = 0;
        std::string violation;
        sched.on_step = [&] {
            ++steps;
            std::set<std::size_t> owned;
            for (const auto &[qubit, pid] : sched.owners()) {
                owned.insert(qubit);
                if (pid != kRootPid && sched.processes().at(pid).status == Status::Done) {
                    violation = fmt::format("finished pid={} still owns qubit {}", pid, qubit);
                }
            }
            if (owned != interp.machine().heap().allocated()) {
                violation = "owned qubits differ from allocated qubits";
            }
        };
        const RunReport r = interp.execute(program);
        ASSERT_EQ(r.exit_status, 0) << source << r.fault;
        EXPECT_TRUE(violation.empty()) << violation << "\n" << source;
        EXPECT_GT(steps, 0u);
        for (const auto &[qubit, pid] : sched.owners()) {
            EXPECT_EQ(pid, kRootPid);
        }
    }
}

TEST(SchedulerProperty, SameSeedSameInterleaving) {
    std::mt19937_64 rng(22);
    for (int c = 0; c < 200; ++c) {
        const auto program = checked(testing::random_comm_program(rng));
        RunConfig config;
        config.seed = 1000 + c;
        config.trace = true;
        const RunReport a = runtime::run(program, config);
        const RunReport b = runtime::run(program, config);
        ASSERT_EQ(a.exit_status, 0) << a.fault;
        EXPECT_EQ(a.trace, b.trace);
        EXPECT_EQ(a.output, b.output);
        EXPECT_EQ(a.measurements, b.measurements);
    }
}

} // namespace
} // namespace qrl::comm
