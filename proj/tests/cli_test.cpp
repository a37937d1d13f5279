#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qrl/cli/session.hpp"

namespace qrl::cli {
namespace {

const std::filesystem::path kPrograms = QRL_PROGRAMS_DIR;

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Session, RegisterTranscript) {
    Session s;
    EXPECT_EQ(s.feed("qureg a[2];"), "");
    EXPECT_EQ(s.feed("qureg b[2];"), "");
    EXPECT_EQ(s.feed("H(a);"), "[4/32] 0.5 |0,0> + 0.5 |1,0> + 0.5 |2,0> + 0.5 |3,0>\n");
    const std::string dump = ": STATE: 4 / 32 qubits allocated, 28 / 32 qubits free\n"
                             "0.5 |0> + 0.5 |1> + 0.5 |2> + 0.5 |3>\n";
    EXPECT_EQ(s.feed("dump"), dump);
    EXPECT_EQ(s.feed("CNot(a[1],b)"), "[4/32] 0.5 |0,0> + 0.5 |1,0> + 0.5 |2,0> + 0.5 |3,0>\n");
    EXPECT_EQ(s.feed("dump"), dump);
}

TEST(Session, ConditionalIncrementTranscript) {
    Session s;
    const std::string src = read_file(kPrograms / "inc_cinc.qrl");
    EXPECT_EQ(s.feed(src.substr(0, src.find("qureg q[4];"))), "");
    EXPECT_EQ(s.feed("qureg q[4];qureg e[1];"), "");
    EXPECT_EQ(s.feed("H(q[3] & e);"), "[5/32] 0.5 |0,0> + 0.5 |8,0> + 0.5 |0,1> + 0.5 |8,1>\n");
    EXPECT_EQ(s.feed("cinc(q,e);"), "[5/32] 0.5 |0,0> + 0.5 |8,0> + 0.5 |1,1> + 0.5 |9,1>\n");
    EXPECT_EQ(s.feed("if e { inc(q); }"), "[5/32] 0.5 |0,0> + 0.5 |8,0> + 0.5 |2,1> + 0.5 |10,1>\n");
    EXPECT_EQ(s.feed("!cinc(q,e);"), "[5/32] 0.5 |0,0> + 0.5 |8,0> + 0.5 |1,1> + 0.5 |9,1>\n");
    EXPECT_EQ(s.feed("if e { !inc(q); }"), "[5/32] 0.5 |0,0> + 0.5 |8,0> + 0.5 |0,1> + 0.5 |8,1>\n");
}

TEST(Session, EmptyMachineDump) {
    Session s;
    EXPECT_EQ(s.feed("dump"), ": STATE: 0 / 32 qubits allocated, 32 / 32 qubits free\n1\n");
}

TEST(Session, RejectedInputChangesNothing) {
    Session s;
    EXPECT_EQ(s.feed("qureg a[1];"), "");
    const std::string bad = s.feed("qureg b[1]; b = a;");
    EXPECT_EQ(s.last_status(), kDiagnostics);
    EXPECT_NE(bad.find("CloneViolation"), std::string::npos) << bad;
    // b was never declared.
    EXPECT_NE(s.feed("H(b);").find("UndefinedName"), std::string::npos);
    EXPECT_EQ(s.feed("H(a);"), "[1/32] 0.707107 |0> + 0.707107 |1>\n");
    EXPECT_EQ(s.last_status(), kOk);
}

TEST(Session, RuntimeFaultKeepsSessionAlive) {
    Session s;
    EXPECT_NE(s.feed("int z; z = 0; print 1 / z;").find("DivisionByZero"), std::string::npos);
    EXPECT_EQ(s.last_status(), kRuntimeFault);
    EXPECT_EQ(s.feed("print 2 + 2;"), "4\n");
}

TEST(Session, CompletenessTracksBracesAndComments) {
    EXPECT_TRUE(Session::complete("H(a);"));
    EXPECT_FALSE(Session::complete("if e {"));
    EXPECT_FALSE(Session::complete("x; /* open"));
    EXPECT_TRUE(Session::complete("if e { inc(q); } // }"));
}

TEST(Session, ReplAndBatchAgree) {
    const std::string src = read_file(kPrograms / "basic_ops.qrl");
    std::istringstream in(src);
    std::ostringstream repl_out;
    runtime::RunConfig config;
    config.dump_on_exit = false;
    repl(in, repl_out, config, "");
    std::ostringstream batch_out;
    std::ostringstream err;
    EXPECT_EQ(run_file(kPrograms / "basic_ops.qrl", config, batch_out, err), kOk);
    // The REPL echoes after quantum statements; the dumps agree.
    const std::string dump_line = ": STATE: 4 / 32 qubits allocated";
    EXPECT_NE(batch_out.str().find(dump_line), std::string::npos);
    const std::string batch = batch_out.str();
    const std::string interactive = repl_out.str();
    const auto last_dump = [](const std::string &text) {
        const std::string tail = text.substr(text.rfind(": STATE"));
        return tail.substr(0, tail.find('\n', tail.find('\n') + 1));
    };
    EXPECT_EQ(last_dump(batch), last_dump(interactive));
}

TEST(Files, ExitCodes) {
    std::ostringstream out;
    std::ostringstream err;
    runtime::RunConfig config;
    EXPECT_EQ(run_file("/nonexistent/file.qrl", config, out, err), kIoError);
    EXPECT_EQ(check_file(kPrograms / "teleport_lanq.qrl", out, err), kOk);

    const auto tmp = std::filesystem::temp_directory_path() / "qrl_cli_test_bad.qrl";
    std::ofstream(tmp) << "qureg a[1];\nqureg b[1];\nb = a;\n";
    std::ostringstream err2;
    EXPECT_EQ(check_file(tmp, out, err2), kDiagnostics);
    EXPECT_NE(err2.str().find(":3:"), std::string::npos) << err2.str();

    std::ofstream(tmp) << "int z; z = 0; print 1 / z;\n";
    std::ostringstream err3;
    EXPECT_EQ(run_file(tmp, config, out, err3), kRuntimeFault);
    EXPECT_NE(err3.str().find("DivisionByZero"), std::string::npos);
    std::filesystem::remove(tmp);
}

TEST(Files, FormatIsStable) {
    std::ostringstream first;
    std::ostringstream err;
    ASSERT_EQ(format_file(kPrograms / "qft.qrl", first, err), kOk);
    const auto tmp = std::filesystem::temp_directory_path() / "qrl_cli_test_fmt.qrl";
    std::ofstream(tmp) << first.str();
    std::ostringstream second;
    ASSERT_EQ(format_file(tmp, second, err), kOk);
    EXPECT_EQ(first.str(), second.str());
    std::filesystem::remove(tmp);
}

TEST(Files, SeedReproducesMeasurementLog) {
    runtime::RunConfig config;
    config.seed = 99;
    config.trace = true;
    std::ostringstream out1, err1, out2, err2;
    ASSERT_EQ(run_file(kPrograms / "teleport_lanq.qrl", config, out1, err1), kOk);
    ASSERT_EQ(run_file(kPrograms / "teleport_lanq.qrl", config, out2, err2), kOk);
    EXPECT_EQ(out1.str(), out2.str());
    EXPECT_EQ(err1.str(), err2.str());
    EXPECT_NE(err1.str().find("measure BellBasis"), std::string::npos) << err1.str();
}

} // namespace
} // namespace qrl::cli
