#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "qrl/frontend/ast.hpp"
#include "qrl/runtime/value.hpp"

namespace qrl::comm {

using Pid = std::size_t;
using runtime::Value;

/// Process 0 is the root; it runs the program's top level and inherits the
/// qubits of every process that finishes.
inline constexpr Pid kRootPid = 0;

enum class Status { Runnable, BlockedSend, BlockedRecv, Done };

struct Process {
    Pid pid = 0;
    std::string name;
    Status status = Status::Runnable;
    std::optional<runtime::ChannelEndRef> waiting_on;
};

/// Rendezvous channel. Direction d carries values sent on end d.
struct Channel {
    std::size_t id = 0;
    std::string name;
    frontend::TypeBase payload = frontend::TypeBase::Int;
    Pid owner[2] = {kRootPid, kRootPid};

    struct Slot {
        std::optional<Value> pending;  // a blocked sender's value
        std::optional<Pid> sender;
        std::optional<Pid> receiver;   // a blocked receiver
        std::optional<Value> delivered;
    };
    Slot dir[2];
};

/// Deterministic cooperative scheduler. Every process runs on its own
/// thread but only the holder of the baton executes; the baton moves in
/// round-robin pid order at blocking points and explicit yields, so runs
/// are reproducible.
class Scheduler {
  public:
    Scheduler();
    ~Scheduler();
    Scheduler(const Scheduler &) = delete;
    Scheduler &operator=(const Scheduler &) = delete;

    /// Runs `root` as pid 0 on the calling thread, then every spawned process
    /// to completion. Rethrows the first fault, including ChannelDeadlock.
    void run(const std::function<void()> &root);

    /// Creates a runnable process; it first runs when the baton reaches it.
    Pid spawn(std::string name, std::function<void()> body);

    /// Passes the baton to the next runnable process, if any.
    void yield();

    [[nodiscard]] Pid current() const noexcept { return current_; }
    [[nodiscard]] std::size_t live_processes() const;
    [[nodiscard]] const std::vector<Process> &processes() const noexcept { return procs_; }

    // Channels.
    std::size_t create_channel(std::string name, frontend::TypeBase payload);
    /// Channel between two processes used by `send ... to` / `receive ... from`,
    /// created on first use; end 0 belongs to the sender.
    std::size_t implicit_channel(Pid sender, Pid receiver, frontend::TypeBase payload);
    void send(runtime::ChannelEndRef end, Value value);
    Value recv(runtime::ChannelEndRef end);
    void give_end(runtime::ChannelEndRef end, Pid to);
    [[nodiscard]] const Channel &channel(std::size_t id) const { return channels_.at(id); }

    // Qubit ownership.
    void claim(const qstate::RegisterRef &reg);
    void unclaim(const qstate::RegisterRef &reg);
    void transfer(const qstate::RegisterRef &reg, Pid to);
    /// Throws OwnershipViolation if the current process does not own a qubit.
    void require_owned(std::span<const std::size_t> qubits) const;
    [[nodiscard]] std::set<std::size_t> owned_by(Pid pid) const;
    [[nodiscard]] const std::map<std::size_t, Pid> &owners() const noexcept { return owner_; }

    /// Lines "pid=<n> <event>" when tracing is on.
    void set_tracing(bool on) { tracing_ = on; }
    std::vector<std::string> take_trace();

    /// Invoked after every ownership change; used by property tests.
    std::function<void()> on_step;

  private:
    struct Aborted {};

    void event(Pid pid, const std::string &what);
    void check_end(runtime::ChannelEndRef end) const;
    std::optional<Pid> next_runnable(Pid after) const;
    void switch_away(std::unique_lock<std::mutex> &lock);
    void wait_for_baton(std::unique_lock<std::mutex> &lock, Pid self);
    void finish(std::unique_lock<std::mutex> &lock, Pid pid);
    std::string deadlock_message(Pid start) const;
    void fail(std::exception_ptr e);

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::vector<Process> procs_;
    std::vector<std::thread> threads_;
    std::vector<Channel> channels_;
    std::map<std::tuple<Pid, Pid, frontend::TypeBase>, std::size_t> implicit_;
    std::map<std::size_t, Pid> owner_;
    Pid current_ = kRootPid;
    std::optional<Pid> active_;
    bool aborting_ = false;
    std::exception_ptr fault_;
    bool tracing_ = false;
    std::vector<std::string> trace_;
};

} // namespace qrl::comm
