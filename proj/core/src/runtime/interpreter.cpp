#include "qrl/runtime/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "qrl/frontend/pretty.hpp"
#include "qrl/gates/gate.hpp"
#include "qrl/gates/synthesis.hpp"
#include "qrl/qstate/dump.hpp"

namespace qrl::runtime {

using frontend::Node;
using frontend::NodeKind;
using frontend::TypeBase;
using frontend::TypeExpr;
using qstate::RegisterRef;

namespace {

struct Variable {
    Value value;
    TypeExpr type;
    bool owns_allocation = false;
};

using Scope = std::map<std::string, Variable>;

struct Frame {
    std::vector<Scope> scopes;
    bool frees_locals = false;
    Value returned;
};

// Execution state of one process.
struct ProcState {
    std::vector<Frame> frames;
    std::vector<std::size_t> controls;
    std::vector<std::vector<TraceStep> *> recording;
    std::vector<RegisterRef> deferred_frees;
};

enum class Flow { Normal, Return };

Error fault(ErrorKind kind, const std::string &message) { return Error(kind, message); }

bool integral(const Value &v) { return std::holds_alternative<Int>(v) || std::holds_alternative<bool>(v); }

bool numeric(const Value &v) { return integral(v) || std::holds_alternative<double>(v); }

Value convert(Value v, const TypeExpr &type) {
    if (type.payload) {
        return v;
    }
    switch (type.base) {
    case TypeBase::Int: return to_int(v);
    case TypeBase::Real: return to_real(v);
    case TypeBase::Bool: return to_bool(v);
    case TypeBase::String:
        if (!std::holds_alternative<std::string>(v)) {
            throw fault(ErrorKind::TypeMismatch,
                        fmt::format("expected string, found {}", value_type_name(v)));
        }
        return v;
    default: return v;
    }
}

Value default_value(const TypeExpr &type) {
    switch (type.base) {
    case TypeBase::Int: return Int(0);
    case TypeBase::Real: return 0.0;
    case TypeBase::Bool: return false;
    case TypeBase::String: return std::string{};
    default: return std::monostate{};
    }
}

const RegisterRef &as_register(const Value &v) {
    if (const auto *r = std::get_if<RegisterRef>(&v)) {
        return *r;
    }
    throw fault(ErrorKind::TypeMismatch, fmt::format("expected a register, found {}", value_type_name(v)));
}

ChannelEndRef as_end(const Value &v) {
    if (const auto *e = std::get_if<ChannelEndRef>(&v)) {
        return *e;
    }
    throw fault(ErrorKind::TypeMismatch,
                fmt::format("expected a channel end, found {}", value_type_name(v)));
}

TypeBase payload_of(const Value &v) {
    if (is_register(v)) return TypeBase::Qureg;
    if (std::holds_alternative<double>(v)) return TypeBase::Real;
    if (std::holds_alternative<std::string>(v)) return TypeBase::String;
    return TypeBase::Int;
}

TypeBase payload_of(const TypeExpr &t) {
    if (t.is_quantum()) return TypeBase::Qureg;
    if (t.base == TypeBase::Bool) return TypeBase::Int;
    return t.base;
}

std::string_view stdlib_gate(std::string_view name) {
    static const std::map<std::string, std::string, std::less<>> kMap = {
        {"H", "H"},   {"Not", "X"},     {"X", "X"},           {"Sigma_x", "X"}, {"Y", "Y"},
        {"Sigma_y", "Y"}, {"Z", "Z"},   {"Sigma_z", "Z"},     {"S", "S"},       {"T", "T"},
        {"SqrtNot", "SqrtNot"}};
    const auto it = kMap.find(name);
    return it == kMap.end() ? std::string_view{} : std::string_view(it->second);
}

bool is_stdlib(std::string_view name) {
    return !stdlib_gate(name).empty() || name == "CNot" || name == "Swap" || name == "RotX" ||
           name == "RotY" || name == "RotZ" || name == "Phase" || name == "CPhase" || name == "FT" ||
           name == "dump_q";
}

} // namespace

struct Interpreter::Impl {
    RunConfig config;
    qstate::Machine machine;
    comm::Scheduler sched;
    Scope globals;
    std::map<std::string, std::shared_ptr<const Node>> subs;
    std::map<std::string, comm::Pid> modules;
    RunReport *report = nullptr;
    bool touched = false;
    frontend::Span last_span;

    explicit Impl(RunConfig c) : config(c), machine(c.capacity, c.seed) {}

    // ---- variables -----------------------------------------------------

    Variable *find(ProcState &ps, const std::string &name) {
        auto &scopes = ps.frames.back().scopes;
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (auto f = it->find(name); f != it->end()) {
                return &f->second;
            }
        }
        if (auto f = globals.find(name); f != globals.end()) {
            return &f->second;
        }
        return nullptr;
    }

    Variable &var(ProcState &ps, const std::string &name) {
        if (Variable *v = find(ps, name)) {
            return *v;
        }
        throw fault(ErrorKind::UndefinedName, fmt::format("undefined name '{}'", name));
    }

    void declare(ProcState &ps, const std::string &name, Variable v) {
        auto &scopes = ps.frames.back().scopes;
        Scope &scope = scopes.empty() ? globals : scopes.back();
        scope[name] = std::move(v);
    }

    void push_scope(ProcState &ps) { ps.frames.back().scopes.emplace_back(); }

    void pop_scope(ProcState &ps) {
        Frame &frame = ps.frames.back();
        Scope scope = std::move(frame.scopes.back());
        frame.scopes.pop_back();
        if (!frame.frees_locals) {
            return;
        }
        for (auto &[name, v] : scope) {
            if (v.owns_allocation) {
                free_register(ps, as_register(v.value));
            }
        }
    }

    void free_register(ProcState &ps, const RegisterRef &reg) {
        const auto owned = sched.owned_by(sched.current());
        const bool still_ours = std::all_of(reg.qubits.begin(), reg.qubits.end(), [&](std::size_t q) {
            return owned.contains(q);
        });
        if (!still_ours) {
            return; // moved to another process
        }
        if (!ps.recording.empty()) {
            ps.deferred_frees.push_back(reg);
            return;
        }
        if (!machine.is_clean(reg)) {
            return; // still entangled or excited; stays allocated
        }
        machine.release(reg);
        sched.unclaim(reg);
    }

    // ---- quantum primitives ------------------------------------------

    void emit(ProcState &ps, const Matrix &u, std::vector<std::size_t> targets,
              std::span<const std::size_t> extra_controls = {}) {
        std::vector<std::size_t> controls = ps.controls;
        for (auto c : extra_controls) {
            if (std::find(controls.begin(), controls.end(), c) == controls.end()) {
                controls.push_back(c);
            }
        }
        if (!ps.recording.empty()) {
            ps.recording.back()->push_back({u, std::move(targets), std::move(controls)});
            return;
        }
        for (auto t : targets) {
            if (std::find(controls.begin(), controls.end(), t) != controls.end()) {
                throw fault(ErrorKind::OverlapViolation,
                            fmt::format("qubit {} is both a target and a control", t));
            }
        }
        std::vector<std::size_t> all = targets;
        all.insert(all.end(), controls.begin(), controls.end());
        sched.require_owned(all);
        if (targets.empty()) {
            machine.apply_phase(u(0, 0), controls);
        } else {
            machine.apply(u, targets, controls);
        }
        touched = true;
    }

    void replay_inverse(ProcState &ps, const std::vector<TraceStep> &steps) {
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            emit(ps, it->u.adjoint(), it->targets, it->controls);
        }
    }

    void require_irreversible_ok(ProcState &ps, std::string_view what) {
        if (!ps.recording.empty()) {
            throw fault(ErrorKind::IrreversibleStatement,
                        fmt::format("'{}' cannot be inverted", what));
        }
    }

    std::uint64_t measure(ProcState &ps, const RegisterRef &reg, const std::string &label) {
        require_irreversible_ok(ps, "measure");
        sched.require_owned(reg.qubits);
        const std::uint64_t k = machine.measure(reg);
        report->measurements.push_back(fmt::format("measure {}: {}", label, k));
        touched = true;
        return k;
    }

    void apply_ft(ProcState &ps, const RegisterRef &reg) {
        const auto seq = gates::qft_sequence(reg.size());
        for (const auto &step : seq.steps) {
            std::vector<std::size_t> targets;
            for (auto slot : step.slots) {
                targets.push_back(reg.qubits.at(slot));
            }
            emit(ps, step.gate.matrix(), std::move(targets));
        }
    }

    void per_qubit(ProcState &ps, const Matrix &u, const RegisterRef &reg) {
        for (auto q : reg.qubits) {
            emit(ps, u, {q});
        }
    }

    void builtin(ProcState &ps, const std::string &name, const std::vector<Value> &args,
                 const std::vector<std::string> &labels) {
        if (const auto gate = stdlib_gate(name); !gate.empty()) {
            expect_args(name, args, 1);
            per_qubit(ps, gates::builtin(gate).matrix(), as_register(args[0]));
        } else if (name == "CNot") {
            expect_args(name, args, 2);
            const RegisterRef &target = as_register(args[0]);
            const RegisterRef &control = as_register(args[1]);
            if (target.overlaps(control)) {
                throw fault(ErrorKind::OverlapViolation, "CNot target and control share qubits");
            }
            const Matrix x = gates::builtin("X").matrix();
            for (auto t : target.qubits) {
                emit(ps, x, {t}, control.qubits);
            }
        } else if (name == "Swap") {
            expect_args(name, args, 2);
            const RegisterRef &a = as_register(args[0]);
            const RegisterRef &b = as_register(args[1]);
            if (a.size() != b.size()) {
                throw fault(ErrorKind::ArityMismatch, "Swap needs registers of equal length");
            }
            if (a.overlaps(b)) {
                throw fault(ErrorKind::OverlapViolation, "Swap arguments share qubits");
            }
            const Matrix swap = gates::builtin("SWAP").matrix();
            for (std::size_t i = 0; i < a.size(); ++i) {
                emit(ps, swap, {a.qubits[i], b.qubits[i]});
            }
        } else if (name == "RotX" || name == "RotY" || name == "RotZ") {
            expect_args(name, args, 2);
            const double xi = to_real(args[0]);
            const Matrix u = name == "RotX" ? gates::rot_x(xi)
                             : name == "RotY" ? gates::rot_y(xi)
                                              : gates::rot_z(xi);
            per_qubit(ps, u, as_register(args[1]));
        } else if (name == "Phase") {
            if (args.size() == 1) {
                emit(ps, Matrix(1, {std::polar(1.0, to_real(args[0]))}), {});
            } else {
                expect_args(name, args, 2);
                per_qubit(ps, gates::phase_shift(to_real(args[0])), as_register(args[1]));
            }
        } else if (name == "CPhase") {
            expect_args(name, args, 2);
            const RegisterRef &reg = as_register(args[1]);
            emit(ps, Matrix(1, {std::polar(1.0, to_real(args[0]))}), {}, reg.qubits);
        } else if (name == "FT") {
            expect_args(name, args, 1);
            apply_ft(ps, as_register(args[0]));
        } else if (name == "dump_q") {
            expect_args(name, args, 1);
            require_irreversible_ok(ps, "dump_q");
            report->output +=
                qstate::format_snapshot(qstate::snapshot(machine, as_register(args[0]), labels[0])) + "\n";
        } else {
            throw fault(ErrorKind::UndefinedName, fmt::format("undefined subroutine '{}'", name));
        }
    }

    static void expect_args(const std::string &name, const std::vector<Value> &args, std::size_t n) {
        if (args.size() != n) {
            throw fault(ErrorKind::ArityMismatch,
                        fmt::format("'{}' takes {} arguments, got {}", name, n, args.size()));
        }
    }

    // ---- calls ---------------------------------------------------------

    std::vector<Value> eval_args(ProcState &ps, const Node &call) {
        std::vector<Value> args;
        for (const auto &a : call.children) {
            args.push_back(eval(ps, a));
        }
        return args;
    }

    Value invoke(ProcState &ps, const Node &call, bool inverse) {
        std::vector<Value> args = eval_args(ps, call);
        std::vector<std::string> labels;
        for (const auto &a : call.children) {
            labels.push_back(frontend::pretty_expression(a));
        }
        auto body = [&] {
            if (const auto it = subs.find(call.text); it != subs.end()) {
                return call_user(ps, *it->second, std::move(args));
            }
            if (is_stdlib(call.text)) {
                builtin(ps, call.text, args, labels);
                return Value{};
            }
            throw fault(ErrorKind::UndefinedName, fmt::format("undefined subroutine '{}'", call.text));
        };
        if (!inverse) {
            return body();
        }
        std::vector<TraceStep> steps;
        const std::size_t deferred_mark = ps.deferred_frees.size();
        ps.recording.push_back(&steps);
        try {
            body();
        } catch (...) {
            ps.recording.pop_back();
            throw;
        }
        ps.recording.pop_back();
        replay_inverse(ps, steps);
        if (ps.recording.empty()) {
            while (ps.deferred_frees.size() > deferred_mark) {
                const RegisterRef reg = ps.deferred_frees.back();
                ps.deferred_frees.pop_back();
                machine.release(reg);
                sched.unclaim(reg);
            }
        }
        return Value{};
    }

    Value call_user(ProcState &ps, const Node &sub, std::vector<Value> args) {
        const auto &params = sub[0].children;
        if (params.size() != args.size()) {
            throw fault(ErrorKind::ArityMismatch,
                        fmt::format("'{}' takes {} arguments, got {}", sub.text, params.size(), args.size()));
        }
        Frame frame;
        frame.frees_locals = true;
        frame.scopes.emplace_back();
        std::vector<std::pair<std::string, RegisterRef>> scratch;
        for (std::size_t i = 0; i < params.size(); ++i) {
            const TypeExpr &type = params[i].type;
            Value v = std::move(args[i]);
            if (type.is_quantum()) {
                const RegisterRef &reg = as_register(v);
                if (type.base == TypeBase::Qbit && reg.size() != 1) {
                    throw fault(ErrorKind::ArityMismatch,
                                fmt::format("parameter '{}' of '{}' is a qbit but got {} qubits",
                                            params[i].text, sub.text, reg.size()));
                }
                if ((type.base == TypeBase::Quvoid || type.base == TypeBase::Quscratch) &&
                    ps.recording.empty() && !machine.is_clean(reg)) {
                    throw fault(ErrorKind::QubitNotClean,
                                fmt::format("argument for '{}' of '{}' must be |0>", params[i].text, sub.text));
                }
                if (type.base == TypeBase::Quscratch && ps.recording.empty()) {
                    scratch.emplace_back(params[i].text, reg);
                }
            } else {
                v = convert(std::move(v), type);
            }
            frame.scopes.back()[params[i].text] = Variable{std::move(v), type, false};
        }
        ps.frames.push_back(std::move(frame));
        exec_block(ps, sub[1]);
        Value result = std::move(ps.frames.back().returned);
        ps.frames.pop_back();
        for (const auto &[name, reg] : scratch) {
            if (!machine.is_clean(reg)) {
                throw fault(ErrorKind::QubitNotClean,
                            fmt::format("scratch argument '{}' of '{}' is not |0> after the call", name, sub.text));
            }
        }
        return result;
    }

    // ---- expressions ---------------------------------------------------

    Value eval(ProcState &ps, const Node &e) {
        switch (e.kind) {
        case NodeKind::IntLit: return Int(e.text);
        case NodeKind::RealLit: return std::stod(e.text);
        case NodeKind::StringLit: return e.text;
        case NodeKind::BoolLit: return e.text == "true";
        case NodeKind::Ident: {
            if (Variable *v = find(ps, e.text)) {
                return v->value;
            }
            if (e.text == "pi") {
                return std::numbers::pi;
            }
            throw fault(ErrorKind::UndefinedName, fmt::format("undefined name '{}'", e.text));
        }
        case NodeKind::Index: {
            const RegisterRef base = as_register(eval(ps, e[0]));
            const auto i = to_int64(eval(ps, e[1]));
            if (i < 0 || static_cast<std::size_t>(i) >= base.size()) {
                throw fault(ErrorKind::InvalidArgument,
                            fmt::format("index {} out of range for register of {} qubits", i, base.size()));
            }
            return base.at(static_cast<std::size_t>(i));
        }
        case NodeKind::Slice: {
            const RegisterRef base = as_register(eval(ps, e[0]));
            const auto offset = to_int64(eval(ps, e[1]));
            const auto length = to_int64(eval(ps, e[2]));
            if (offset < 0 || length < 0 ||
                static_cast<std::size_t>(offset + length) > base.size()) {
                throw fault(ErrorKind::InvalidArgument,
                            fmt::format("slice {}::{} out of range for register of {} qubits", offset,
                                        length, base.size()));
            }
            return base.slice(static_cast<std::size_t>(offset), static_cast<std::size_t>(length));
        }
        case NodeKind::Length: return Int(as_register(eval(ps, e[0])).size());
        case NodeKind::Concat: {
            const RegisterRef a = as_register(eval(ps, e[0]));
            return a.concat(as_register(eval(ps, e[1])));
        }
        case NodeKind::Unary: {
            const Value v = eval(ps, e[0]);
            if (e.text == "not") {
                return !to_bool(v);
            }
            if (integral(v)) {
                return Int(-to_int(v));
            }
            return -to_real(v);
        }
        case NodeKind::Binary: return binary(e.text, eval(ps, e[0]), eval(ps, e[1]));
        case NodeKind::CallExpr: return invoke(ps, e, false);
        case NodeKind::MeasureExpr: return Int(measure_expr(ps, e));
        case NodeKind::RecvExpr: {
            require_irreversible_ok(ps, "recv");
            return sched.recv(as_end(eval(ps, e[0])));
        }
        case NodeKind::NewChannel:
            return ChannelRef{sched.create_channel("channel", e.type.payload.value_or(TypeBase::Int))};
        default:
            throw fault(ErrorKind::Internal, fmt::format("cannot evaluate {}", frontend::to_string(e.kind)));
        }
    }

    static Value binary(const std::string &op, const Value &a, const Value &b) {
        if (op == "and") return to_bool(a) && to_bool(b);
        if (op == "or") return to_bool(a) || to_bool(b);
        if (op == "xor") return to_bool(a) != to_bool(b);
        if (op == "==" || op == "!=") {
            bool eq = false;
            if (numeric(a) && numeric(b)) {
                eq = integral(a) && integral(b) ? to_int(a) == to_int(b) : to_real(a) == to_real(b);
            } else {
                eq = a == b;
            }
            return op == "==" ? eq : !eq;
        }
        if (op == "+" && std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b)) {
            return std::get<std::string>(a) + std::get<std::string>(b);
        }
        const bool ints = integral(a) && integral(b);
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            int cmp = 0;
            if (ints) {
                const Int x = to_int(a);
                const Int y = to_int(b);
                cmp = x < y ? -1 : (x > y ? 1 : 0);
            } else {
                const double x = to_real(a);
                const double y = to_real(b);
                cmp = x < y ? -1 : (x > y ? 1 : 0);
            }
            if (op == "<") return cmp < 0;
            if (op == "<=") return cmp <= 0;
            if (op == ">") return cmp > 0;
            return cmp >= 0;
        }
        if (ints) {
            const Int x = to_int(a);
            const Int y = to_int(b);
            if (op == "+") return Int(x + y);
            if (op == "-") return Int(x - y);
            if (op == "*") return Int(x * y);
            if (op == "/" || op == "mod") {
                if (y == 0) {
                    throw fault(ErrorKind::DivisionByZero, "integer division by zero");
                }
                return op == "/" ? Int(x / y) : Int(x % y);
            }
            if (op == "^") {
                if (y >= 0) {
                    if (y > 100000) {
                        throw fault(ErrorKind::InvalidArgument, "exponent too large");
                    }
                    return Int(boost::multiprecision::pow(x, static_cast<unsigned>(y)));
                }
                return std::pow(to_real(a), to_real(b));
            }
        } else {
            const double x = to_real(a);
            const double y = to_real(b);
            if (op == "+") return x + y;
            if (op == "-") return x - y;
            if (op == "*") return x * y;
            if (op == "/" || op == "mod") {
                if (y == 0.0) {
                    throw fault(ErrorKind::DivisionByZero, "division by zero");
                }
                return op == "/" ? x / y : std::fmod(x, y);
            }
            if (op == "^") return std::pow(x, y);
        }
        throw fault(ErrorKind::Internal, fmt::format("unknown operator '{}'", op));
    }

    std::uint64_t measure_expr(ProcState &ps, const Node &e) {
        if (e.children.size() == 3 && e[0].kind == NodeKind::Ident && e[0].text == "BellBasis" &&
            !find(ps, "BellBasis")) {
            const RegisterRef phi = as_register(eval(ps, e[1]));
            const RegisterRef aux = as_register(eval(ps, e[2]));
            if (phi.size() != 1 || aux.size() != 1) {
                throw fault(ErrorKind::ArityMismatch, "a Bell-basis measurement takes two single qubits");
            }
            require_irreversible_ok(ps, "measure");
            emit(ps, gates::builtin("X").matrix(), aux.qubits, phi.qubits);
            emit(ps, gates::builtin("H").matrix(), phi.qubits);
            const std::string label = fmt::format("BellBasis({}, {})", frontend::pretty_expression(e[1]),
                                                  frontend::pretty_expression(e[2]));
            sched.require_owned(phi.qubits);
            sched.require_owned(aux.qubits);
            const std::uint64_t m_phi = machine.measure(phi);
            const std::uint64_t m_aux = machine.measure(aux);
            const std::uint64_t result = m_phi + 2 * m_aux;
            report->measurements.push_back(fmt::format("measure {}: {}", label, result));
            return result;
        }
        RegisterRef all;
        std::string label;
        for (const auto &operand : e.children) {
            all = all.concat(as_register(eval(ps, operand)));
            label += (label.empty() ? "" : " & ") + frontend::pretty_expression(operand);
        }
        return measure(ps, all, label);
    }

    // ---- statements ----------------------------------------------------

    Flow exec_list(ProcState &ps, const std::vector<Node> &list) {
        for (const auto &s : list) {
            if (exec(ps, s) == Flow::Return) {
                return Flow::Return;
            }
        }
        return Flow::Normal;
    }

    Flow exec_block(ProcState &ps, const Node &block) {
        push_scope(ps);
        Flow flow = Flow::Normal;
        try {
            flow = exec_list(ps, block.children);
        } catch (...) {
            ps.frames.back().scopes.pop_back();
            throw;
        }
        pop_scope(ps);
        return flow;
    }

    void maybe_yield(ProcState &ps) {
        if (ps.recording.empty() && sched.live_processes() > 1) {
            sched.yield();
        }
    }

    Flow exec(ProcState &ps, const Node &s) {
        last_span = s.span;
        switch (s.kind) {
        case NodeKind::VarDecl: var_decl(ps, s); break;
        case NodeKind::SubDecl:
            if (!s.is_extern && !s[1].empty()) {
                subs[s.text] = std::make_shared<const Node>(s);
            }
            break;
        case NodeKind::Block: return exec_block(ps, s);
        case NodeKind::If: {
            if (to_bool(eval(ps, s[0]))) {
                return exec_block(ps, s[1]);
            }
            if (s[2].kind == NodeKind::Block) {
                return exec_block(ps, s[2]);
            }
            if (!s[2].empty()) {
                return exec(ps, s[2]);
            }
            break;
        }
        case NodeKind::QuantumIf: {
            const RegisterRef cond = as_register(eval(ps, s[0]));
            const std::size_t mark = ps.controls.size();
            for (auto q : cond.qubits) {
                if (std::find(ps.controls.begin(), ps.controls.end(), q) == ps.controls.end()) {
                    ps.controls.push_back(q);
                }
            }
            Flow flow = Flow::Normal;
            try {
                flow = exec_block(ps, s[1]);
            } catch (...) {
                ps.controls.resize(mark);
                throw;
            }
            ps.controls.resize(mark);
            return flow;
        }
        case NodeKind::While:
            while (to_bool(eval(ps, s[0]))) {
                if (exec_block(ps, s[1]) == Flow::Return) {
                    return Flow::Return;
                }
            }
            break;
        case NodeKind::DoUntil:
            do {
                if (exec_block(ps, s[0]) == Flow::Return) {
                    return Flow::Return;
                }
            } while (!to_bool(eval(ps, s[1])));
            break;
        case NodeKind::ForRange: return for_range(ps, s);
        case NodeKind::Assign: assign(ps, s); break;
        case NodeKind::Call:
        case NodeKind::InverseCall:
            invoke(ps, s, s.kind == NodeKind::InverseCall);
            maybe_yield(ps);
            break;
        case NodeKind::Measure: {
            const RegisterRef reg = as_register(eval(ps, s[0]));
            const std::uint64_t k = measure(ps, reg, frontend::pretty_expression(s[0]));
            if (!s[1].empty()) {
                Variable &v = var(ps, s[1].text);
                v.value = convert(Int(k), v.type);
            }
            maybe_yield(ps);
            break;
        }
        case NodeKind::MeasureIf: {
            const RegisterRef reg = as_register(eval(ps, s[0]));
            const std::uint64_t k = measure(ps, reg, frontend::pretty_expression(s[0]));
            if (k == 0) {
                return exec_block(ps, s[1]);
            }
            if (!s[2].empty()) {
                return exec_block(ps, s[2]);
            }
            break;
        }
        case NodeKind::Reset: reset(ps, s); break;
        case NodeKind::Dump: dump(ps, s); break;
        case NodeKind::Print: {
            require_irreversible_ok(ps, "print");
            std::string line;
            for (const auto &item : s.children) {
                if (!line.empty()) {
                    line += ' ';
                }
                line += format_value(eval(ps, item));
            }
            report->output += line + "\n";
            break;
        }
        case NodeKind::Return:
            ps.frames.back().returned = s[0].empty() ? Value{} : eval(ps, s[0]);
            return Flow::Return;
        case NodeKind::Send: {
            require_irreversible_ok(ps, "send");
            const ChannelEndRef end = as_end(eval(ps, s[0]));
            sched.send(end, eval(ps, s[1]));
            break;
        }
        case NodeKind::SendTo: send_to(ps, s); break;
        case NodeKind::ReceiveFrom: receive_from(ps, s); break;
        case NodeKind::Fork: fork(ps, s); break;
        case NodeKind::ChannelDecl: {
            const auto payload = s.type.payload.value_or(TypeBase::Int);
            const std::size_t id = sched.create_channel(s.text, payload);
            declare(ps, s.text, Variable{ChannelRef{id}, s.type, false});
            TypeExpr end_type;
            end_type.base = TypeBase::ChannelEnd;
            end_type.payload = payload;
            for (int k = 0; k < 2; ++k) {
                declare(ps, s[static_cast<std::size_t>(k)].text, Variable{ChannelEndRef{id, k}, end_type, false});
            }
            break;
        }
        case NodeKind::AliasFor: {
            RegisterRef all;
            for (const auto &part : s.children) {
                all = all.concat(as_register(eval(ps, part)));
            }
            TypeExpr type;
            type.base = TypeBase::Qureg;
            declare(ps, s.text, Variable{std::move(all), type, false});
            break;
        }
        case NodeKind::GateApply:
            gate_apply(ps, s);
            maybe_yield(ps);
            break;
        case NodeKind::Module: spawn_module(s); break;
        default:
            throw fault(ErrorKind::Internal,
                        fmt::format("cannot execute {}", frontend::to_string(s.kind)));
        }
        return Flow::Normal;
    }

    void var_decl(ProcState &ps, const Node &s) {
        if (s.type.is_quantum()) {
            const std::int64_t n = s[0].empty() ? 1 : to_int64(eval(ps, s[0]));
            if (n < 0) {
                throw fault(ErrorKind::InvalidArgument, fmt::format("negative register length {}", n));
            }
            Int init = 0;
            if (!s[1].empty()) {
                init = to_int(eval(ps, s[1]));
                if (init < 0 || (n < 64 && init >= (Int(1) << n))) {
                    throw fault(ErrorKind::InvalidArgument,
                                fmt::format("initial value {} does not fit {} qubits", init.str(), n));
                }
            }
            const RegisterRef reg = machine.allocate(static_cast<std::size_t>(n), s.text);
            sched.claim(reg);
            const Matrix x = gates::builtin("X").matrix();
            for (std::size_t j = 0; j < reg.size(); ++j) {
                if (boost::multiprecision::bit_test(init, static_cast<unsigned>(j))) {
                    machine.apply(x, std::vector<std::size_t>{reg.qubits[j]});
                    touched = true;
                }
            }
            declare(ps, s.text, Variable{reg, s.type, true});
            return;
        }
        Value v = default_value(s.type);
        if (s.type.base == TypeBase::Channel) {
            v = ChannelRef{sched.create_channel(s.text, s.type.payload.value_or(TypeBase::Int))};
        }
        if (!s[1].empty()) {
            v = convert(eval(ps, s[1]), s.type);
        }
        declare(ps, s.text, Variable{std::move(v), s.type, false});
    }

    Flow for_range(ProcState &ps, const Node &s) {
        const Int from = to_int(eval(ps, s[0]));
        const Int to = to_int(eval(ps, s[1]));
        const Int step = s[2].empty() ? Int(1) : to_int(eval(ps, s[2]));
        if (step == 0) {
            throw fault(ErrorKind::InvalidArgument, "for loop step is zero");
        }
        push_scope(ps);
        if (!find(ps, s.text)) {
            TypeExpr type;
            type.base = TypeBase::Int;
            declare(ps, s.text, Variable{Int(0), type, false});
        }
        Flow flow = Flow::Normal;
        try {
            for (Int i = from; step > 0 ? i <= to : i >= to; i += step) {
                var(ps, s.text).value = i;
                if (exec_block(ps, s[3]) == Flow::Return) {
                    flow = Flow::Return;
                    break;
                }
            }
        } catch (...) {
            ps.frames.back().scopes.pop_back();
            throw;
        }
        pop_scope(ps);
        return flow;
    }

    void assign(ProcState &ps, const Node &s) {
        if (s[0].kind != NodeKind::Ident) {
            throw fault(ErrorKind::TypeMismatch, "cannot assign to this expression");
        }
        Variable &target = var(ps, s[0].text);
        // `c = new channel[T]()` initialises an already declared channel.
        if (s[1].kind == NodeKind::NewChannel && std::holds_alternative<ChannelRef>(target.value)) {
            return;
        }
        Value v = convert(eval(ps, s[1]), target.type);
        var(ps, s[0].text).value = std::move(v);
    }

    void reset(ProcState &ps, const Node &s) {
        require_irreversible_ok(ps, "reset");
        if (s[0].empty()) {
            const auto owned = sched.owned_by(sched.current());
            if (owned.size() == machine.heap().allocated_count()) {
                machine.reset_all();
            } else {
                const std::vector<std::size_t> qubits(owned.begin(), owned.end());
                machine.reset(qubits);
            }
        } else {
            const RegisterRef reg = as_register(eval(ps, s[0]));
            sched.require_owned(reg.qubits);
            machine.reset(reg.qubits);
        }
        touched = true;
        maybe_yield(ps);
    }

    void dump(ProcState &ps, const Node &s) {
        require_irreversible_ok(ps, "dump");
        if (s[0].empty()) {
            report->output += (config.dump_format == DumpFormat::Json ? qstate::dump_json(machine)
                                                                      : qstate::dump_state(machine)) +
                              "\n";
            return;
        }
        const RegisterRef reg = as_register(eval(ps, s[0]));
        report->output += qstate::format_snapshot(
                              qstate::snapshot(machine, reg, frontend::pretty_expression(s[0]))) +
                          "\n";
    }

    void gate_apply(ProcState &ps, const Node &s) {
        std::vector<RegisterRef> targets;
        for (std::size_t i = 1; i < s.children.size(); ++i) {
            targets.push_back(as_register(eval(ps, s[i])));
        }
        const Node &spec = s[0];
        if (spec.kind == NodeKind::GateRef && spec.text == "FT") {
            RegisterRef reg;
            // Listed targets run from most to least significant.
            for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
                reg = reg.concat(*it);
            }
            if (!spec.children.empty() && to_int64(eval(ps, spec[0])) != static_cast<std::int64_t>(reg.size())) {
                throw fault(ErrorKind::ArityMismatch,
                            fmt::format("FT({}) applied to {} qubits", to_int64(eval(ps, spec[0])), reg.size()));
            }
            apply_ft(ps, reg);
            return;
        }
        std::optional<gates::Gate> gate;
        if (spec.kind == NodeKind::GateRef) {
            std::vector<double> params;
            for (const auto &p : spec.children) {
                params.push_back(to_real(eval(ps, p)));
            }
            gate = gates::builtin(spec.text, params);
        } else {
            std::vector<Complex> entries;
            for (const auto &p : spec.children) {
                entries.emplace_back(to_real(eval(ps, p)));
            }
            const auto dim = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
            if (dim * dim != entries.size()) {
                throw fault(ErrorKind::InvalidArgument,
                            fmt::format("a gate matrix needs a square number of entries, got {}", entries.size()));
            }
            gate.emplace("matrix", Matrix(dim, std::move(entries)));
        }
        RegisterRef all;
        for (const auto &t : targets) {
            all = all.concat(t);
        }
        if (gate->arity() == all.size()) {
            emit(ps, gate->matrix(), all.qubits);
        } else if (gate->arity() == 1) {
            per_qubit(ps, gate->matrix(), all);
        } else {
            throw fault(ErrorKind::ArityMismatch, fmt::format("gate '{}' acts on {} qubits, got {}",
                                                              gate->name(), gate->arity(), all.size()));
        }
    }

    void send_to(ProcState &ps, const Node &s) {
        require_irreversible_ok(ps, "send");
        const auto it = modules.find(s.text);
        if (it == modules.end()) {
            throw fault(ErrorKind::UndefinedName, fmt::format("no module named '{}'", s.text));
        }
        for (const auto &item : s.children) {
            Value v = eval(ps, item);
            const std::size_t id = sched.implicit_channel(sched.current(), it->second, payload_of(v));
            sched.send({id, 0}, std::move(v));
        }
    }

    void receive_from(ProcState &ps, const Node &s) {
        require_irreversible_ok(ps, "receive");
        const auto it = modules.find(s.text);
        if (it == modules.end()) {
            throw fault(ErrorKind::UndefinedName, fmt::format("no module named '{}'", s.text));
        }
        for (const auto &p : s.children) {
            const std::size_t id = sched.implicit_channel(it->second, sched.current(), payload_of(p.type));
            Value v = sched.recv({id, 1});
            if (!p.type.is_quantum()) {
                v = convert(std::move(v), p.type);
            }
            declare(ps, p.text, Variable{std::move(v), p.type, false});
        }
    }

    void fork(ProcState &ps, const Node &s) {
        require_irreversible_ok(ps, "fork");
        const auto it = subs.find(s.text);
        if (it == subs.end()) {
            throw fault(ErrorKind::UndefinedName, fmt::format("undefined subroutine '{}'", s.text));
        }
        std::vector<Value> args = eval_args(ps, s);
        for (const auto &a : args) {
            if (const auto *reg = std::get_if<RegisterRef>(&a)) {
                sched.require_owned(reg->qubits);
            }
        }
        std::shared_ptr<const Node> sub = it->second;
        const comm::Pid child = sched.spawn(s.text, [this, sub, args] {
            ProcState state;
            state.frames.emplace_back();
            call_user(state, *sub, args);
        });
        for (const auto &a : args) {
            if (const auto *reg = std::get_if<RegisterRef>(&a)) {
                sched.transfer(*reg, child);
            } else if (const auto *end = std::get_if<ChannelEndRef>(&a)) {
                sched.give_end(*end, child);
            }
        }
    }

    void spawn_module(const Node &s) {
        const Node *block = &s[0];
        modules[s.text] = sched.spawn(s.text, [this, block] {
            ProcState state;
            state.frames.emplace_back();
            state.frames.back().scopes.emplace_back();
            exec_list(state, block->children);
        });
    }

    void hoist(const std::vector<Node> &list) {
        for (const auto &s : list) {
            if (s.kind == NodeKind::SubDecl && !s.is_extern && !s[1].empty()) {
                subs[s.text] = std::make_shared<const Node>(s);
            } else if (s.kind == NodeKind::Module) {
                hoist(s[0].children);
            } else if (s.kind == NodeKind::Block) {
                hoist(s.children);
            }
        }
    }
};

Interpreter::Interpreter(RunConfig config) : impl_(std::make_unique<Impl>(config)) {}

Interpreter::~Interpreter() = default;

qstate::Machine &Interpreter::machine() { return impl_->machine; }

comm::Scheduler &Interpreter::scheduler() { return impl_->sched; }

const RunConfig &Interpreter::config() const { return impl_->config; }

std::optional<Value> Interpreter::global(const std::string &name) const {
    const auto it = impl_->globals.find(name);
    if (it == impl_->globals.end()) {
        return std::nullopt;
    }
    return it->second.value;
}

RunReport Interpreter::execute(const Node &program) {
    Impl &im = *impl_;
    RunReport report;
    im.report = &report;
    im.sched.set_tracing(im.config.trace);
    im.hoist(program.children);
    const bool has_main = std::any_of(program.children.begin(), program.children.end(), [](const Node &s) {
        return s.kind == NodeKind::SubDecl && s.text == "main" && !s[1].empty() && s[0].children.empty();
    });
    ProcState root;
    root.frames.emplace_back();
    try {
        im.sched.run([&] {
            for (const auto &s : program.children) {
                im.touched = false;
                im.exec(root, s);
                if (im.config.echo && im.touched) {
                    report.output += qstate::dump_line(im.machine) + "\n";
                }
            }
            if (has_main) {
                im.call_user(root, *im.subs.at("main"), {});
            }
        });
    } catch (const Error &e) {
        report.exit_status = 2;
        report.fault_kind = e.kind();
        report.fault = fmt::format("{}:{}: {}: {}", im.last_span.line, im.last_span.column,
                                   to_string(e.kind()), e.what());
    } catch (const std::exception &e) {
        report.exit_status = 2;
        report.fault_kind = ErrorKind::Internal;
        report.fault = fmt::format("{}:{}: Internal: {}", im.last_span.line, im.last_span.column, e.what());
    }
    report.trace = im.sched.take_trace();
    if (im.config.dump_on_exit) {
        report.final_dump = im.config.dump_format == DumpFormat::Json ? qstate::dump_json(im.machine)
                                                                       : qstate::dump_state(im.machine);
    }
    im.report = nullptr;
    return report;
}

std::vector<TraceStep> Interpreter::record(const Node &call) {
    Impl &im = *impl_;
    RunReport scratch;
    im.report = &scratch;
    ProcState ps;
    ps.frames.emplace_back();
    std::vector<TraceStep> steps;
    ps.recording.push_back(&steps);
    im.invoke(ps, call, call.kind == NodeKind::InverseCall);
    im.report = nullptr;
    return steps;
}

RunReport run(const Node &program, const RunConfig &config) {
    Interpreter interpreter(config);
    return interpreter.execute(program);
}

} // namespace qrl::runtime
