#include "qrl/comm/scheduler.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::comm {

Scheduler::Scheduler() { procs_.push_back({kRootPid, "main", Status::Done, {}}); }

Scheduler::~Scheduler() {
    {
        std::lock_guard lock(mu_);
        aborting_ = true;
    }
    cv_.notify_all();
    for (auto &t : threads_) {
        if (t.joinable()) {
            t.join();
        }
    }
}

void Scheduler::event(Pid pid, const std::string &what) {
    if (tracing_) {
        trace_.push_back(fmt::format("pid={} {}", pid, what));
    }
    if (on_step) {
        on_step();
    }
}

std::vector<std::string> Scheduler::take_trace() {
    std::lock_guard lock(mu_);
    return std::exchange(trace_, {});
}

std::size_t Scheduler::live_processes() const {
    std::lock_guard lock(mu_);
    return static_cast<std::size_t>(std::count_if(procs_.begin(), procs_.end(), [](const Process &p) {
        return p.status != Status::Done;
    }));
}

void Scheduler::fail(std::exception_ptr e) {
    if (!fault_) {
        fault_ = std::move(e);
    }
    aborting_ = true;
    cv_.notify_all();
}

void Scheduler::run(const std::function<void()> &root) {
    {
        std::lock_guard lock(mu_);
        aborting_ = false;
        fault_ = nullptr;
        procs_[kRootPid].status = Status::Runnable;
        active_ = kRootPid;
        current_ = kRootPid;
    }
    try {
        root();
    } catch (const Aborted &) {
    } catch (...) {
        std::lock_guard lock(mu_);
        fail(std::current_exception());
    }
    {
        std::unique_lock lock(mu_);
        finish(lock, kRootPid);
        cv_.wait(lock, [&] {
            return aborting_ || std::all_of(procs_.begin(), procs_.end(), [](const Process &p) {
                       return p.status == Status::Done;
                   });
        });
    }
    for (auto &t : threads_) {
        t.join();
    }
    threads_.clear();
    std::exception_ptr fault;
    {
        std::lock_guard lock(mu_);
        fault = std::exchange(fault_, nullptr);
        aborting_ = false;
        active_.reset();
        current_ = kRootPid;
        // Processes stopped by a fault leave their qubits behind too.
        for (auto &[q, owner] : owner_) {
            owner = kRootPid;
        }
        for (auto &ch : channels_) {
            ch.dir[0] = {};
            ch.dir[1] = {};
        }
    }
    if (fault) {
        std::rethrow_exception(fault);
    }
}

Pid Scheduler::spawn(std::string name, std::function<void()> body) {
    std::lock_guard lock(mu_);
    const Pid pid = procs_.size();
    procs_.push_back({pid, name, Status::Runnable, {}});
    event(current_, fmt::format("fork {} -> pid={}", name, pid));
    threads_.emplace_back([this, pid, body = std::move(body)] {
        {
            std::unique_lock lock(mu_);
            try {
                wait_for_baton(lock, pid);
            } catch (const Aborted &) {
                finish(lock, pid);
                return;
            }
        }
        try {
            body();
        } catch (const Aborted &) {
        } catch (...) {
            std::lock_guard lock(mu_);
            fail(std::current_exception());
        }
        std::unique_lock lock(mu_);
        finish(lock, pid);
    });
    return pid;
}

std::optional<Pid> Scheduler::next_runnable(Pid after) const {
    const std::size_t n = procs_.size();
    for (std::size_t k = 1; k <= n; ++k) {
        const Pid p = (after + k) % n;
        if (procs_[p].status == Status::Runnable) {
            return p;
        }
    }
    return std::nullopt;
}

void Scheduler::wait_for_baton(std::unique_lock<std::mutex> &lock, Pid self) {
    cv_.wait(lock, [&] { return aborting_ || active_ == self; });
    if (aborting_) {
        throw Aborted{};
    }
    current_ = self;
}

void Scheduler::switch_away(std::unique_lock<std::mutex> &lock) {
    const Pid self = current_;
    const auto next = next_runnable(self);
    if (!next) {
        throw Error(ErrorKind::ChannelDeadlock, deadlock_message(self));
    }
    if (*next == self) {
        return;
    }
    active_ = *next;
    current_ = *next;
    cv_.notify_all();
    wait_for_baton(lock, self);
}

void Scheduler::yield() {
    std::unique_lock lock(mu_);
    if (aborting_) {
        throw Aborted{};
    }
    if (on_step) {
        on_step();
    }
    switch_away(lock);
}

void Scheduler::finish(std::unique_lock<std::mutex> &lock, Pid pid) {
    (void)lock;
    procs_[pid].status = Status::Done;
    procs_[pid].waiting_on.reset();
    if (pid != kRootPid) {
        for (auto &[q, owner] : owner_) {
            if (owner == pid) {
                owner = kRootPid;
            }
        }
        for (auto &ch : channels_) {
            for (auto &o : ch.owner) {
                if (o == pid) {
                    o = kRootPid;
                }
            }
        }
    }
    event(pid, "done");
    if (aborting_) {
        cv_.notify_all();
        return;
    }
    if (const auto next = next_runnable(pid)) {
        active_ = *next;
        current_ = *next;
    } else {
        active_.reset();
        const auto blocked = std::find_if(procs_.begin(), procs_.end(), [](const Process &p) {
            return p.status != Status::Done;
        });
        if (blocked != procs_.end()) {
            fail(std::make_exception_ptr(
                Error(ErrorKind::ChannelDeadlock, deadlock_message(blocked->pid))));
        }
    }
    cv_.notify_all();
}

std::string Scheduler::deadlock_message(Pid start) const {
    auto describe = [&](Pid p) { return fmt::format("pid={} ({})", p, procs_[p].name); };
    std::vector<Pid> path;
    std::vector<std::string> steps;
    Pid p = start;
    while (true) {
        if (const auto it = std::find(path.begin(), path.end(), p); it != path.end()) {
            const auto first = static_cast<std::size_t>(it - path.begin());
            std::string msg = "deadlock: ";
            for (std::size_t i = first; i < steps.size(); ++i) {
                msg += steps[i] + ", ";
            }
            return msg + "which closes the cycle";
        }
        const Process &proc = procs_[p];
        if (proc.status == Status::Done || proc.status == Status::Runnable || !proc.waiting_on) {
            std::string msg = "deadlock: ";
            for (const auto &s : steps) {
                msg += s + ", ";
            }
            return msg + fmt::format("but {} has finished", describe(p));
        }
        const auto end = *proc.waiting_on;
        const Channel &ch = channels_[end.channel];
        const Pid other = ch.owner[1 - end.end];
        steps.push_back(fmt::format("{} waits to {} on '{}' for {}", describe(p),
                                    proc.status == Status::BlockedSend ? "send" : "recv", ch.name,
                                    describe(other)));
        path.push_back(p);
        p = other;
    }
}

std::size_t Scheduler::create_channel(std::string name, frontend::TypeBase payload) {
    std::lock_guard lock(mu_);
    Channel ch;
    ch.id = channels_.size();
    ch.name = std::move(name);
    ch.payload = payload;
    ch.owner[0] = ch.owner[1] = current_;
    channels_.push_back(std::move(ch));
    return channels_.back().id;
}

std::size_t Scheduler::implicit_channel(Pid sender, Pid receiver, frontend::TypeBase payload) {
    std::lock_guard lock(mu_);
    const auto key = std::make_tuple(sender, receiver, payload);
    if (const auto it = implicit_.find(key); it != implicit_.end()) {
        return it->second;
    }
    Channel ch;
    ch.id = channels_.size();
    ch.name = fmt::format("{}->{}:{}", procs_.at(sender).name, procs_.at(receiver).name,
                          frontend::to_string(payload));
    ch.payload = payload;
    ch.owner[0] = sender;
    ch.owner[1] = receiver;
    channels_.push_back(std::move(ch));
    implicit_[key] = channels_.back().id;
    return channels_.back().id;
}

void Scheduler::check_end(runtime::ChannelEndRef end) const {
    if (end.channel >= channels_.size() || end.end < 0 || end.end > 1) {
        throw Error(ErrorKind::ChannelClosed, "invalid channel end");
    }
    if (channels_[end.channel].owner[end.end] != current_) {
        throw Error(ErrorKind::OwnershipViolation,
                    fmt::format("pid={} does not own end {} of channel '{}'", current_, end.end,
                                channels_[end.channel].name));
    }
}

void Scheduler::give_end(runtime::ChannelEndRef end, Pid to) {
    std::lock_guard lock(mu_);
    check_end(end);
    channels_[end.channel].owner[end.end] = to;
}

namespace {

void move_payload(std::map<std::size_t, Pid> &owner, std::vector<Channel> &channels, const Value &v,
                  Pid to) {
    if (const auto *reg = std::get_if<qstate::RegisterRef>(&v)) {
        for (auto q : reg->qubits) {
            owner[q] = to;
        }
    } else if (const auto *end = std::get_if<runtime::ChannelEndRef>(&v)) {
        channels[end->channel].owner[end->end] = to;
    }
}

} // namespace

void Scheduler::send(runtime::ChannelEndRef end, Value value) {
    std::unique_lock lock(mu_);
    if (aborting_) {
        throw Aborted{};
    }
    check_end(end);
    if (const auto *reg = std::get_if<qstate::RegisterRef>(&value)) {
        for (auto q : reg->qubits) {
            const auto it = owner_.find(q);
            if (it == owner_.end() || it->second != current_) {
                throw Error(ErrorKind::OwnershipViolation,
                            fmt::format("pid={} cannot send qubit {} it does not own", current_, q));
            }
        }
    }
    Channel &ch = channels_[end.channel];
    Channel::Slot &slot = ch.dir[end.end];
    const Pid self = current_;
    event(self, fmt::format("send {}", ch.name));
    if (slot.receiver) {
        const Pid r = *slot.receiver;
        slot.receiver.reset();
        move_payload(owner_, channels_, value, r);
        slot.delivered = std::move(value);
        procs_[r].status = Status::Runnable;
        procs_[r].waiting_on.reset();
        event(r, "unblock");
        return;
    }
    slot.pending = std::move(value);
    slot.sender = self;
    procs_[self].status = Status::BlockedSend;
    procs_[self].waiting_on = end;
    event(self, fmt::format("block send {}", ch.name));
    switch_away(lock);
}

Value Scheduler::recv(runtime::ChannelEndRef end) {
    std::unique_lock lock(mu_);
    if (aborting_) {
        throw Aborted{};
    }
    check_end(end);
    Channel &ch = channels_[end.channel];
    Channel::Slot &slot = ch.dir[1 - end.end];
    const Pid self = current_;
    if (slot.pending) {
        Value v = std::move(*slot.pending);
        slot.pending.reset();
        const Pid s = *slot.sender;
        slot.sender.reset();
        move_payload(owner_, channels_, v, self);
        procs_[s].status = Status::Runnable;
        procs_[s].waiting_on.reset();
        event(s, "unblock");
        event(self, fmt::format("recv {}", ch.name));
        return v;
    }
    slot.receiver = self;
    procs_[self].status = Status::BlockedRecv;
    procs_[self].waiting_on = end;
    event(self, fmt::format("block recv {}", ch.name));
    switch_away(lock);
    Channel::Slot &done = channels_[end.channel].dir[1 - end.end];
    Value v = std::move(*done.delivered);
    done.delivered.reset();
    event(self, fmt::format("recv {}", channels_[end.channel].name));
    return v;
}

void Scheduler::claim(const qstate::RegisterRef &reg) {
    std::lock_guard lock(mu_);
    for (auto q : reg.qubits) {
        owner_[q] = current_;
    }
}

void Scheduler::unclaim(const qstate::RegisterRef &reg) {
    std::lock_guard lock(mu_);
    for (auto q : reg.qubits) {
        owner_.erase(q);
    }
}

void Scheduler::transfer(const qstate::RegisterRef &reg, Pid to) {
    std::lock_guard lock(mu_);
    for (auto q : reg.qubits) {
        const auto it = owner_.find(q);
        if (it == owner_.end() || it->second != current_) {
            throw Error(ErrorKind::OwnershipViolation,
                        fmt::format("pid={} cannot hand over qubit {} it does not own", current_, q));
        }
        it->second = to;
    }
    if (on_step) {
        on_step();
    }
}

void Scheduler::require_owned(std::span<const std::size_t> qubits) const {
    std::lock_guard lock(mu_);
    for (auto q : qubits) {
        const auto it = owner_.find(q);
        if (it == owner_.end() || it->second != current_) {
            throw Error(ErrorKind::OwnershipViolation,
                        fmt::format("pid={} does not own qubit {}", current_, q));
        }
    }
}

std::set<std::size_t> Scheduler::owned_by(Pid pid) const {
    std::lock_guard lock(mu_);
    std::set<std::size_t> out;
    for (const auto &[q, owner] : owner_) {
        if (owner == pid) {
            out.insert(q);
        }
    }
    return out;
}

} // namespace qrl::comm
