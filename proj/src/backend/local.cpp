// Copyright 2026 The elastikit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <elastikit/backend/local.hpp>
#include <elastikit/core/error.hpp>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <limits>

#include <sys/prctl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace elastikit::backend {

namespace {

constexpr int kBindFailureExit = 3;
constexpr int kBindAttempts = 3;

// Non-blocking reap. Returns the exit status once the child is gone.
std::optional<int> reap(pid_t pid) {
    int status = 0;
    auto r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid || (r < 0 && errno == ECHILD)) return status;
    return std::nullopt;
}

}// namespace

LocalBackend::LocalBackend(const Clock& clock, events::EventBus& bus, LocalOptions options)
    : clock_(clock), bus_(bus), options_(std::move(options)) {
    if (clock_.is_virtual()) throw Error(ErrorCode::InvalidConfig, "local backend needs a wall clock");
    if (options_.billing_time_unit_ms <= 0) throw Error(ErrorCode::InvalidConfig, "billing time unit must be positive");
    if (::access(options_.hostd_path.c_str(), X_OK) != 0) {
        throw Error(ErrorCode::SpawnFailure, "not executable: " + options_.hostd_path);
    }
    subscription_ = bus_.subscribe([this](const MonitoringEvent& e) {
        if (e.type != event_type::HostOnline && e.type != event_type::HostOffline) return;
        auto const* h = e.property("host_id");
        if (h == nullptr || h->kind() != Value::Kind::Text) return;
        auto id = CloudHostId::from_hex(h->as_text());
        if (!id) return;
        {
            std::lock_guard lock(seen_mu_);
            seen_.emplace(e.type, *id);
        }
        seen_cv_.notify_all();
    });
    spawner_ = std::thread(&LocalBackend::spawner_loop, this);
    billing_thread_ = std::thread(&LocalBackend::billing_loop, this);
}

LocalBackend::~LocalBackend() { shutdown(); }

void LocalBackend::emit(std::string_view type, const CloudHostId& id) {
    bus_.emit(MonitoringEvent{std::string(type), 0, EventSource::manager(), {{"host_id", Value::text(id.hex())}}});
}

// Forks from one long-lived thread: the parent-death signal is tied to the
// forking thread, not the process.
void LocalBackend::spawner_loop() {
    while (true) {
        SpawnRequest* req = nullptr;
        {
            std::unique_lock lock(spawn_mu_);
            spawn_cv_.wait(lock, [&] { return spawner_stop_ || !spawn_queue_.empty(); });
            if (spawn_queue_.empty()) return;
            req = spawn_queue_.front();
            spawn_queue_.pop_front();
        }
        std::vector<char*> argv;
        for (auto& a : req->argv) argv.push_back(a.data());
        argv.push_back(nullptr);
        auto parent = ::getpid();
        auto pid = ::fork();
        if (pid == 0) {
            ::prctl(PR_SET_PDEATHSIG, SIGKILL);
            if (::getppid() != parent) ::_exit(1);
            ::close_range(3, std::numeric_limits<unsigned>::max(), 0);
            ::dup2(STDERR_FILENO, STDOUT_FILENO);// keep the parent's stdout clean
            ::execv(argv[0], argv.data());
            ::_exit(127);
        }
        if (pid < 0) {
            req->result.set_exception(
                std::make_exception_ptr(Error(ErrorCode::SpawnFailure, std::string("fork: ") + std::strerror(errno))));
        } else {
            req->result.set_value(pid);
        }
    }
}

pid_t LocalBackend::spawn(std::vector<std::string> argv) {
    SpawnRequest req{std::move(argv), {}};
    auto f = req.result.get_future();
    {
        std::lock_guard lock(spawn_mu_);
        if (spawner_stop_) throw Error(ErrorCode::SpawnFailure, "backend is shutting down");
        spawn_queue_.push_back(&req);
    }
    spawn_cv_.notify_all();
    return f.get();
}

bool LocalBackend::wait_lifecycle(const CloudHostId& id, std::string_view type, std::chrono::milliseconds timeout) {
    std::unique_lock lock(seen_mu_);
    return seen_cv_.wait_for(lock, timeout, [&] { return seen_.contains({std::string(type), id}); });
}

void LocalBackend::stop_process(pid_t pid) {
    ::kill(pid, SIGTERM);
    auto deadline = std::chrono::steady_clock::now() + options_.stop_timeout;
    while (std::chrono::steady_clock::now() < deadline) {
        if (reap(pid)) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);
}

CloudHostRecord LocalBackend::provision(const std::string& size) {
    {
        std::lock_guard lock(mu_);
        if (stopping_) throw Error(ErrorCode::SpawnFailure, "backend is shutting down");
        std::size_t live = pending_;
        for (auto const& [id, h] : hosts_) {
            if (h.record.state != HostState::Gone) ++live;
        }
        if (live >= options_.max_hosts) {
            throw Error(ErrorCode::QuotaExceeded, std::to_string(options_.max_hosts) + " hosts");
        }
        ++pending_;
    }
    struct Pending {
        LocalBackend& b;
        ~Pending() {
            std::lock_guard lock(b.mu_);
            --b.pending_;
        }
    } pending{*this};

    auto id = ids_.next<CloudHostId>();
    auto requested_at = clock_.now_ms();
    emit(event_type::HostProvisionRequested, id);

    for (int attempt = 0; attempt < kBindAttempts; ++attempt) {
        wire::Endpoint ep{"127.0.0.1", wire::pick_free_port()};
        auto pid = spawn({options_.hostd_path, "--listen", ep.to_string(), "--callback",
                          options_.callback.to_string(), "--host-id", id.hex()});
        auto deadline = std::chrono::steady_clock::now() + options_.start_timeout;
        std::optional<int> exited;
        bool online = false;
        while (std::chrono::steady_clock::now() < deadline) {
            if (wait_lifecycle(id, event_type::HostOnline, std::chrono::milliseconds(20))) {
                online = true;
                break;
            }
            if ((exited = reap(pid))) break;
        }
        if (online) {
            std::lock_guard lock(mu_);
            Host h;
            h.record = {id, ep, requested_at, options_.billing_time_unit_ms, HostState::Online, size};
            h.pid = pid;
            h.next_boundary = requested_at + options_.billing_time_unit_ms;
            hosts_.emplace(id, std::move(h));
            cv_.notify_all();
            return hosts_.at(id).record;
        }
        if (!exited) {
            ::kill(pid, SIGKILL);
            int status = 0;
            ::waitpid(pid, &status, 0);
            throw Error(ErrorCode::StartTimeout, id.hex() + " not online after " +
                                                     std::to_string(options_.start_timeout.count()) + " ms");
        }
        if (!(WIFEXITED(*exited) && WEXITSTATUS(*exited) == kBindFailureExit)) {
            throw Error(ErrorCode::SpawnFailure, "hostd exited with status " + std::to_string(*exited));
        }
    }
    throw Error(ErrorCode::SpawnFailure, "no free port after " + std::to_string(kBindAttempts) + " attempts");
}

void LocalBackend::terminate(const CloudHostId& id) {
    pid_t pid = -1;
    {
        std::lock_guard lock(mu_);
        auto it = hosts_.find(id);
        if (it == hosts_.end() || it->second.record.state != HostState::Online) {
            throw Error(ErrorCode::UnknownHost, id.hex());
        }
        it->second.record.state = HostState::Terminating;
        pid = it->second.pid;
    }
    stop_process(pid);
    // The goodbye travels over the callback link; let it land first.
    wait_lifecycle(id, event_type::HostOffline, std::chrono::milliseconds(1000));
    {
        std::lock_guard lock(mu_);
        hosts_.at(id).record.state = HostState::Gone;
    }
    emit(event_type::HostTerminated, id);
}

void LocalBackend::kill(const CloudHostId& id) {
    pid_t pid = -1;
    {
        std::lock_guard lock(mu_);
        auto it = hosts_.find(id);
        if (it == hosts_.end() || it->second.record.state == HostState::Gone) {
            throw Error(ErrorCode::UnknownHost, id.hex());
        }
        it->second.record.state = HostState::Gone;
        pid = it->second.pid;
    }
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);
}

std::optional<pid_t> LocalBackend::pid_of(const CloudHostId& id) const {
    std::lock_guard lock(mu_);
    auto it = hosts_.find(id);
    if (it == hosts_.end()) return std::nullopt;
    return it->second.pid;
}

std::vector<CloudHostRecord> LocalBackend::list() const {
    std::lock_guard lock(mu_);
    std::vector<CloudHostRecord> out;
    for (auto const& [id, h] : hosts_) {
        if (h.record.state != HostState::Gone) out.push_back(h.record);
    }
    return out;
}

std::optional<CloudHostRecord> LocalBackend::find(const CloudHostId& id) const {
    std::lock_guard lock(mu_);
    auto it = hosts_.find(id);
    if (it == hosts_.end()) return std::nullopt;
    return it->second.record;
}

void LocalBackend::set_billing_handler(BillingHandler handler) {
    std::lock_guard lock(mu_);
    billing_ = std::move(handler);
}

void LocalBackend::billing_loop() {
    std::unique_lock lock(mu_);
    while (!stopping_) {
        auto next = std::numeric_limits<std::int64_t>::max();
        for (auto const& [id, h] : hosts_) {
            if (h.record.state == HostState::Online) next = std::min(next, h.next_boundary);
        }
        if (next == std::numeric_limits<std::int64_t>::max()) {
            cv_.wait(lock);
            continue;
        }
        auto now = clock_.now_ms();
        if (now < next) {
            cv_.wait_for(lock, std::chrono::milliseconds(next - now));
            continue;
        }
        std::vector<CloudHostId> due;
        for (auto& [id, h] : hosts_) {
            if (h.record.state == HostState::Online && h.next_boundary <= now) {
                h.next_boundary += options_.billing_time_unit_ms;
                due.push_back(id);
            }
        }
        auto handler = billing_;
        lock.unlock();
        bus_.tick();
        for (auto const& id : due) {
            if (handler) handler(id);
        }
        lock.lock();
    }
}

void LocalBackend::shutdown() {
    std::vector<CloudHostId> live;
    {
        std::lock_guard lock(mu_);
        if (stopping_ && !billing_thread_.joinable()) return;
        stopping_ = true;
        billing_ = nullptr;
        for (auto const& [id, h] : hosts_) {
            if (h.record.state == HostState::Online) live.push_back(id);
        }
    }
    cv_.notify_all();
    if (billing_thread_.joinable() && billing_thread_.get_id() != std::this_thread::get_id()) billing_thread_.join();
    for (auto const& id : live) {
        try {
            terminate(id);
        } catch (const Error&) {
        }
    }
    {
        std::lock_guard lock(spawn_mu_);
        spawner_stop_ = true;
    }
    spawn_cv_.notify_all();
    if (spawner_.joinable()) spawner_.join();
    if (subscription_ != 0) {
        bus_.unsubscribe(subscription_);
        subscription_ = 0;
    }
}

}// namespace elastikit::backend
