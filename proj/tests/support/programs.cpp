#include "support/programs.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "qrl/frontend/parser.hpp"
#include "qrl/typecheck/checker.hpp"

namespace qrl::testing {

namespace {

std::size_t pick(std::mt19937_64 &rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double angle(std::mt19937_64 &rng) {
    return std::uniform_real_distribution<double>(0.0, 6.283185307179586)(rng);
}

// Two distinct indices below n (n >= 2).
std::pair<std::size_t, std::size_t> pair_of(std::mt19937_64 &rng, std::size_t n) {
    const std::size_t a = pick(rng, n);
    std::size_t b = pick(rng, n - 1);
    if (b >= a) {
        ++b;
    }
    return {a, b};
}

} // namespace

frontend::Node parse_unchecked(const std::string &source) { return frontend::parse_source(source); }

Execution execute(const std::string &source, const runtime::RunConfig &config) {
    frontend::Node program = frontend::parse_source(source);
    typecheck::Checker checker;
    const auto diags = checker.check(program);
    if (typecheck::has_errors(diags)) {
        std::string msg = "program does not check:\n" + source + "\n";
        for (const auto &d : diags) {
            msg += typecheck::render(d, "generated") + "\n";
        }
        throw std::runtime_error(msg);
    }
    Execution ex{std::make_unique<runtime::Interpreter>(config), {}};
    ex.report = ex.interpreter->execute(program);
    return ex;
}

Matrix matrix_by_columns(std::size_t n, const std::function<std::string(std::uint64_t)> &source_for) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix m(dim);
    for (std::uint64_t k = 0; k < dim; ++k) {
        const auto ex = execute(source_for(k));
        if (ex.report.exit_status != 0) {
            throw std::runtime_error("program faulted: " + ex.report.fault);
        }
        const auto amps = ex.interpreter->machine().state().amplitudes();
        for (std::size_t row = 0; row < dim; ++row) {
            m(row, k) = row < amps.size() ? amps[row] : Complex{};
        }
    }
    return m;
}

std::string random_operator_body(std::mt19937_64 &rng, std::size_t n, const std::string &reg) {
    std::string body;
    const std::size_t count = 3 + pick(rng, 8);
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t i = pick(rng, n);
        const std::size_t choice = pick(rng, n >= 2 ? 10 : 5);
        switch (choice) {
        case 0: body += fmt::format("H({}[{}]);\n", reg, i); break;
        case 1: body += fmt::format("RotX({:.17g}, {}[{}]);\n", angle(rng), reg, i); break;
        case 2: body += fmt::format("RotY({:.17g}, {}[{}]);\n", angle(rng), reg, i); break;
        case 3: body += fmt::format("RotZ({:.17g}, {}[{}]);\n", angle(rng), reg, i); break;
        case 4: body += fmt::format("Phase({:.17g}, {}[{}]);\n", angle(rng), reg, i); break;
        case 5: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("CNot({0}[{1}], {0}[{2}]);\n", reg, a, b);
            break;
        }
        case 6: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("Swap({0}[{1}], {0}[{2}]);\n", reg, a, b);
            break;
        }
        case 7: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("CPhase({:.17g}, {}[{}] & {}[{}]);\n", angle(rng), reg, a, reg, b);
            break;
        }
        case 8: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("if {0}[{1}] {{ RotY({2:.17g}, {0}[{3}]); H({0}[{3}]); }}\n", reg, a,
                                angle(rng), b);
            break;
        }
        default: {
            const std::size_t len = 1 + pick(rng, n);
            const std::size_t off = pick(rng, n - len + 1);
            body += fmt::format("FT({}[{}::{}]);\n", reg, off, len);
            break;
        }
        }
    }
    return body;
}

std::string random_qufunct_body(std::mt19937_64 &rng, std::size_t n, const std::string &reg) {
    std::string body;
    const std::size_t count = 2 + pick(rng, 8);
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t choice = n >= 3 ? pick(rng, 5) : (n == 2 ? pick(rng, 4) : 0);
        switch (choice) {
        case 0: body += fmt::format("Not({}[{}]);\n", reg, pick(rng, n)); break;
        case 1: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("CNot({0}[{1}], {0}[{2}]);\n", reg, a, b);
            break;
        }
        case 2: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("Swap({0}[{1}], {0}[{2}]);\n", reg, a, b);
            break;
        }
        case 3: {
            const auto [a, b] = pair_of(rng, n);
            body += fmt::format("{0}[{1}], {0}[{2}] *= CNot;\n", reg, a, b);
            break;
        }
        default: {
            const auto [a, b] = pair_of(rng, n);
            std::size_t c = pick(rng, n);
            while (c == a || c == b) {
                c = (c + 1) % n;
            }
            body += fmt::format("{0}[{1}], {0}[{2}], {0}[{3}] *= Toffoli;\n", reg, a, b, c);
            break;
        }
        }
    }
    return body;
}

std::string random_preparation(std::mt19937_64 &rng, std::size_t n, const std::string &reg) {
    std::string body;
    for (std::size_t i = 0; i < n; ++i) {
        body += fmt::format("RotY({:.17g}, {}[{}]);\n", angle(rng), reg, i);
        body += fmt::format("RotZ({:.17g}, {}[{}]);\n", angle(rng), reg, i);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        body += fmt::format("CNot({0}[{1}], {0}[{2}]);\n", reg, i + 1, i);
        body += fmt::format("RotX({:.17g}, {}[{}]);\n", angle(rng), reg, i);
    }
    return body;
}

std::string random_comm_program(std::mt19937_64 &rng) {
    std::string src;
    if (pick(rng, 2) == 0) {
        // Forked workers, each owning one register and reporting a measurement.
        const std::size_t workers = 1 + pick(rng, 3);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t n = 1 + pick(rng, 2);
            src += fmt::format("void worker{}(channelEnd[int] e, qureg r) {{\n", w);
            src += random_operator_body(rng, n, "r");
            src += "  int m;\n  m = measure r;\n  send (e, m);\n}\n";
        }
        src += "void main() {\n";
        std::vector<std::size_t> sizes;
        for (std::size_t w = 0; w < workers; ++w) {
            src += fmt::format("  channel[int] c{0} withends [c{0}a, c{0}b];\n", w);
        }
        std::mt19937_64 sizes_rng(rng());
        for (std::size_t w = 0; w < workers; ++w) {
            src += fmt::format("  qureg r{}[{}];\n", w, 2);
            src += fmt::format("  H(r{}[0]);\n  CNot(r{}[1], r{}[0]);\n", w, w, w);
        }
        for (std::size_t w = 0; w < workers; ++w) {
            src += fmt::format("  fork worker{0}(c{0}a, r{0});\n", w);
        }
        std::vector<std::size_t> order(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            order[w] = w;
        }
        std::shuffle(order.begin(), order.end(), rng);
        src += "  int v;\n";
        for (auto w : order) {
            src += fmt::format("  v = recv(c{}b);\n  print v;\n", w);
        }
        src += "}\n";
        return src;
    }
    // A chain of modules handing registers forward.
    const std::size_t stages = 2 + pick(rng, 3);
    const std::size_t n = 1 + pick(rng, 3);
    for (std::size_t s = 0; s < stages; ++s) {
        src += fmt::format("module M{} {{\n", s);
        if (s == 0) {
            src += fmt::format("  new qureg x[{}] := 0;\n", n);
            src += "  new qbit keep := 1;\n";
        } else {
            src += fmt::format("  receive x:qureg from M{};\n", s - 1);
        }
        src += random_operator_body(rng, n, "x");
        if (s + 1 < stages) {
            src += fmt::format("  send x to M{};\n", s + 1);
        } else {
            src += "  new int m := 0;\n  m := measure x;\n  print m;\n";
        }
        src += "};\n";
    }
    return src;
}

} // namespace qrl::testing
