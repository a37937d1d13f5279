#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qrl/error.hpp"
#include "qrl/gates/gate.hpp"
#include "qrl/qstate/dump.hpp"
#include "qrl/qstate/machine.hpp"
#include "support/oracles.hpp"

namespace qrl::qstate {
namespace {

using gates::builtin;
using qrl::testing::born_probabilities;
using qrl::testing::embed;
using qrl::testing::haar_unitary_2x2;
using qrl::testing::mat_vec;

std::vector<Complex> amps_of(const Machine &m) {
    const auto s = m.state().amplitudes();
    return {s.begin(), s.end()};
}

TEST(Heap, AllocatesLowestFreeIndices) {
    QuantumHeap heap(8);
    const auto a = heap.allocate(3);
    EXPECT_EQ(a.qubits, (std::vector<std::size_t>{0, 1, 2}));
    const auto b = heap.allocate(2);
    heap.release(a);
    const auto c = heap.allocate(4);
    EXPECT_EQ(c.qubits, (std::vector<std::size_t>{0, 1, 2, 5}));
    EXPECT_EQ(heap.allocated_count(), 6U);
    EXPECT_EQ(heap.free_count(), 2U);
    EXPECT_EQ(heap.span(), 6U);
    try {
        heap.allocate(3);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfQubits);
    }
    (void)b;
}

TEST(Register, SliceConcatAndValues) {
    const RegisterRef r{{4, 5, 6, 7}};
    EXPECT_EQ(r.at(0).qubits, std::vector<std::size_t>{4});
    EXPECT_EQ(r.slice(1, 2).qubits, (std::vector<std::size_t>{5, 6}));
    EXPECT_THROW((void)r.slice(3, 2), Error);
    EXPECT_EQ(r.slice(0, 1).concat(r.slice(3, 1)).qubits, (std::vector<std::size_t>{4, 7}));
    try {
        (void)r.concat(r.at(2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OverlapViolation);
    }
    // Element j has weight 2^j.
    EXPECT_EQ(r.value_in(0b1010'0000), 0b1010U);
    EXPECT_TRUE(r.overlaps(RegisterRef{{7, 9}}));
    EXPECT_FALSE(r.overlaps(RegisterRef{{8}}));
}

TEST(Machine, FreshRegistersAreZero) {
    Machine m(32, 1);
    const auto a = m.allocate(3, "a");
    EXPECT_EQ(m.state()[0], Complex(1.0));
    EXPECT_TRUE(m.is_clean(a));
    EXPECT_EQ(dump_line(m), "[3/32] 1 |0>");
}

TEST(Machine, CapacityExceeded) {
    Machine m(4, 1);
    m.allocate(3);
    try {
        m.allocate(2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfQubits);
    }
}

TEST(Machine, ReleaseRequiresClean) {
    Machine m(8, 1);
    const auto a = m.allocate(1, "a");
    m.apply_gate(builtin("X"), a);
    try {
        m.release(a);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::QubitNotClean);
    }
    m.apply_gate(builtin("X"), a);
    m.release(a);
    EXPECT_EQ(m.heap().allocated_count(), 0U);
}

TEST(Machine, ArityMismatch) {
    Machine m(8, 1);
    const auto a = m.allocate(1);
    try {
        m.apply_gate(builtin("CNOT"), a);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
    }
}

TEST(Machine, EmptyRegisterMeasure) {
    Machine m(8, 1);
    try {
        m.measure(RegisterRef{});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyRegister);
    }
}

TEST(Machine, GateApplicationMatchesEmbeddingOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Machine m(8, static_cast<std::uint64_t>(trial));
        const auto reg = m.allocate(4);
        // Random product start state.
        for (std::size_t q = 0; q < 4; ++q) {
            m.apply(haar_unitary_2x2(rng), std::vector<std::size_t>{q});
        }
        std::vector<std::size_t> order = {0, 1, 2, 3};
        std::shuffle(order.begin(), order.end(), rng);
        const Matrix u = kron(haar_unitary_2x2(rng), haar_unitary_2x2(rng));
        const std::vector<std::size_t> targets = {order[0], order[1]};
        const std::vector<std::size_t> controls = {order[2]};
        const auto before = amps_of(m);
        m.apply(u, targets, controls);
        const auto expected = mat_vec(embed(u, targets, controls, 4), before);
        const auto after = amps_of(m);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            ASSERT_NEAR(std::abs(after[i] - expected[i]), 0.0, 1e-12);
        }
        EXPECT_NEAR(m.state().norm_squared(), 1.0, 1e-12);
        (void)reg;
    }
}

TEST(Machine, NonUnitaryRejected) {
    Machine m(8, 1);
    m.allocate(1);
    const std::size_t t[] = {0};
    try {
        m.apply(Matrix(2, {1.0, 0.0, 0.0, 0.5}), t);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonUnitary);
    }
}

TEST(Measure, BornRuleAndCollapse) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        Machine m(8, static_cast<std::uint64_t>(trial) + 100);
        const auto reg = m.allocate(3);
        for (std::size_t q = 0; q < 3; ++q) {
            m.apply(haar_unitary_2x2(rng), std::vector<std::size_t>{q});
        }
        m.apply(builtin("CNOT").matrix(), std::vector<std::size_t>{0, 2});
        const auto sub = reg.slice(0, 2);
        const auto probs = born_probabilities(amps_of(m), sub.qubits);
        const auto engine = m.state().outcome_probabilities(sub.qubits);
        for (std::size_t v = 0; v < probs.size(); ++v) {
            EXPECT_NEAR(engine[v], probs[v], 1e-12);
        }
        const std::uint64_t outcome = m.measure(sub);
        EXPECT_GT(probs[outcome], 0.0);
        const auto after = born_probabilities(amps_of(m), sub.qubits);
        EXPECT_NEAR(after[outcome], 1.0, 1e-12);
        EXPECT_NEAR(m.state().norm_squared(), 1.0, 1e-12);
        // Measuring again yields the same value.
        EXPECT_EQ(m.measure(sub), outcome);
    }
}

TEST(Measure, FrequenciesFollowBornRule) {
    Machine m(4, 2024);
    const auto q = m.allocate(1);
    const double theta = 2.0 * std::acos(std::sqrt(0.3));
    const int shots = 20000;
    int ones = 0;
    for (int i = 0; i < shots; ++i) {
        m.apply(gates::rot_y(theta), q.qubits);
        ones += static_cast<int>(m.measure(q));
        m.reset(q.qubits);
    }
    // P(1) = 0.7; 5 sigma is about 0.016.
    EXPECT_NEAR(static_cast<double>(ones) / shots, 0.7, 0.016);
}

TEST(Measure, SeedDeterminism) {
    auto run = [](std::uint64_t seed) {
        Machine m(8, seed);
        const auto a = m.allocate(4);
        std::vector<std::uint64_t> out;
        for (int i = 0; i < 50; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                m.apply_gate(builtin("H"), a.at(j));
            }
            out.push_back(m.measure(a));
            m.reset(a.qubits);
        }
        return out;
    };
    EXPECT_EQ(run(7), run(7));
    EXPECT_NE(run(7), run(8));
}

TEST(Locality, OperationsOnAPreserveMarginalOfB) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Machine m(8, static_cast<std::uint64_t>(trial));
        const auto a = m.allocate(2);
        const auto b = m.allocate(2);
        for (std::size_t q = 0; q < 4; ++q) {
            m.apply(haar_unitary_2x2(rng), std::vector<std::size_t>{q});
        }
        m.apply(builtin("CNOT").matrix(), std::vector<std::size_t>{a.qubits[0], b.qubits[1]});
        m.apply(builtin("CNOT").matrix(), std::vector<std::size_t>{b.qubits[0], a.qubits[1]});
        const auto before = qrl::testing::marginal(amps_of(m), b.qubits);
        m.apply(kron(haar_unitary_2x2(rng), haar_unitary_2x2(rng)), a.qubits);
        if (trial % 2 == 0) {
            // Unconditioned measurement of A leaves B's marginal unchanged on average;
            // check the averaged distribution over both branches by enumeration.
            const auto probs_a = born_probabilities(amps_of(m), a.qubits);
            std::vector<double> mixed(4, 0.0);
            for (std::uint64_t v = 0; v < 4; ++v) {
                if (probs_a[v] <= 1e-15) {
                    continue;
                }
                StateVector copy = m.state();
                copy.collapse(a.qubits, v);
                const auto mb = qrl::testing::marginal(copy.amplitudes(), b.qubits);
                for (std::size_t k = 0; k < 4; ++k) {
                    mixed[k] += probs_a[v] * mb[k];
                }
            }
            for (std::size_t k = 0; k < 4; ++k) {
                EXPECT_NEAR(mixed[k], before[k], 1e-10);
            }
        } else {
            const auto after = qrl::testing::marginal(amps_of(m), b.qubits);
            for (std::size_t k = 0; k < 4; ++k) {
                EXPECT_NEAR(after[k], before[k], 1e-10);
            }
        }
    }
}

TEST(Reset, PartialResetClearsOnlyTargets) {
    Machine m(8, 3);
    const auto a = m.allocate(1, "a");
    const auto b = m.allocate(1, "b");
    m.apply_gate(builtin("H"), a);
    m.apply_gate(builtin("X"), b);
    m.reset(a.qubits);
    EXPECT_TRUE(m.is_clean(a));
    EXPECT_NEAR(m.state().probability_one(b.qubits[0]), 1.0, 1e-12);
    reset(m);
    EXPECT_TRUE(m.is_clean(b));
    EXPECT_EQ(m.state()[0], Complex(1.0));
}

TEST(Dump, UniformSuperpositionLine) {
    Machine m(32, 1);
    const auto a = m.allocate(2, "a");
    const auto b = m.allocate(2, "b");
    for (std::size_t q = 0; q < 2; ++q) {
        m.apply_gate(builtin("H"), a.at(q));
    }
    EXPECT_EQ(dump_line(m), "[4/32] 0.5 |0,0> + 0.5 |1,0> + 0.5 |2,0> + 0.5 |3,0>");
    EXPECT_EQ(dump_state(m),
              ": STATE: 4 / 32 qubits allocated, 28 / 32 qubits free\n"
              "0.5 |0> + 0.5 |1> + 0.5 |2> + 0.5 |3>");
    (void)b;
}

TEST(Dump, BellPair) {
    Machine m(32, 1);
    const auto a = m.allocate(1, "a");
    const auto b = m.allocate(1, "b");
    m.apply_gate(builtin("H"), a);
    m.apply_gate(builtin("CNOT"), a.concat(b));
    EXPECT_EQ(dump_line(m), "[2/32] 0.707107 |0,0> + 0.707107 |1,1>");
}

TEST(Dump, AmplitudeFormats) {
    EXPECT_EQ(format_amplitude({0.5, 0.0}), "0.5");
    EXPECT_EQ(format_amplitude({0.0, 0.5}), "0.5i");
    EXPECT_EQ(format_amplitude({0.0, -0.5}), "-0.5i");
    EXPECT_EQ(format_amplitude({0.5, -0.25}), "(0.5-0.25i)");
    EXPECT_EQ(format_amplitude({1e-12, 1.0}), "1i");
}

TEST(Dump, EmptyMachine) {
    Machine m(32, 1);
    EXPECT_EQ(dump_line(m), "[0/32] 1");
}

TEST(Dump, JsonCarriesTerms) {
    Machine m(8, 1);
    const auto a = m.allocate(1, "a");
    m.apply_gate(builtin("H"), a);
    const auto j = nlohmann::json::parse(dump_json(m));
    EXPECT_EQ(j["allocated"], 1);
    EXPECT_EQ(j["terms"].size(), 2U);
    EXPECT_EQ(j["registers"][0]["name"], "a");
}

TEST(Snapshot, PureAndMixed) {
    Machine m(8, 1);
    const auto a = m.allocate(1, "a");
    const auto b = m.allocate(1, "b");
    m.apply_gate(builtin("H"), a);
    auto snap = snapshot(m, a, "a");
    EXPECT_TRUE(snap.pure);
    EXPECT_EQ(format_snapshot(snap), ": REGISTER a: 0.707107 |0> + 0.707107 |1>");
    m.apply_gate(builtin("CNOT"), a.concat(b));
    snap = snapshot(m, a, "a");
    EXPECT_FALSE(snap.pure);
    EXPECT_EQ(format_snapshot(snap), ": SPECTRUM a: 0.5 |0> + 0.5 |1>");
}

} // namespace
} // namespace qrl::qstate
