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

#include <elastikit/backend/simulated.hpp>
#include <elastikit/core/error.hpp>

#include <limits>

namespace elastikit::backend {

std::string_view to_string(HostState s) noexcept {
    switch (s) {
        case HostState::Starting: return "Starting";
        case HostState::Online: return "Online";
        case HostState::Terminating: return "Terminating";
        case HostState::Gone: return "Gone";
    }
    return "?";
}

SimulatedBackend::SimulatedBackend(VirtualClock& clock, events::EventBus& bus, const hostd::ClassRegistry& registry,
                                   SimulatedOptions options)
    : clock_(clock), bus_(bus), registry_(registry), options_(std::move(options)) {
    if (options_.billing_time_unit_ms <= 0) throw Error(ErrorCode::InvalidConfig, "billing time unit must be positive");
    if (options_.startup_delay_ms < 0) throw Error(ErrorCode::InvalidConfig, "startup delay must not be negative");
}

SimulatedBackend::~SimulatedBackend() { shutdown(); }

void SimulatedBackend::emit(std::string_view type, const CloudHostId& id, bool from_host) {
    bus_.emit(MonitoringEvent{std::string(type), 0, from_host ? EventSource::host(id) : EventSource::manager(),
                              {{"host_id", Value::text(id.hex())}}});
}

CloudHostRecord SimulatedBackend::provision(const std::string& size) {
    std::lock_guard advancing(advance_mu_);
    CloudHostId id;
    std::int64_t online_at = 0;
    {
        std::lock_guard lock(mu_);
        std::size_t live = 0;
        for (auto const& [hid, h] : hosts_) {
            if (h.record.state != HostState::Gone) ++live;
        }
        if (live >= options_.max_hosts) {
            throw Error(ErrorCode::QuotaExceeded, std::to_string(options_.max_hosts) + " hosts");
        }
        id = ids_.next<CloudHostId>();
        auto now = clock_.now_ms();
        Host h;
        h.record = {id, {}, now, options_.billing_time_unit_ms, HostState::Starting, size};
        h.online_at = online_at = now + options_.startup_delay_ms;
        h.next_boundary = now + options_.billing_time_unit_ms;
        hosts_.emplace(id, std::move(h));
    }
    emit(event_type::HostProvisionRequested, id, false);

    hostd::HostOptions ho;
    ho.listen = {"127.0.0.1", 0};
    ho.callback = options_.callback;
    ho.host_id = id;
    ho.announce_lifecycle = false;
    ho.simulated = true;
    auto daemon = std::make_unique<hostd::HostDaemon>(registry_, ho);
    try {
        daemon->start();
    } catch (const Error& e) {
        std::lock_guard lock(mu_);
        hosts_.erase(id);
        throw Error(ErrorCode::SpawnFailure, std::string(to_string(e.code())) + ": " + e.detail());
    }
    {
        std::lock_guard lock(mu_);
        auto& h = hosts_.at(id);
        h.record.endpoint = daemon->endpoint();
        h.daemon = std::move(daemon);
    }
    advance_to(online_at);
    return *find(id);
}

void SimulatedBackend::advance_clock(std::int64_t dt_ms) {
    if (dt_ms < 0) throw Error(ErrorCode::InvalidConfig, "cannot move time backwards");
    advance_to(clock_.now_ms() + dt_ms);
}

void SimulatedBackend::advance_to(std::int64_t target) {
    std::lock_guard advancing(advance_mu_);
    while (true) {
        auto next = std::numeric_limits<std::int64_t>::max();
        {
            std::lock_guard lock(mu_);
            for (auto const& [id, h] : hosts_) {
                if (h.record.state == HostState::Starting) next = std::min(next, h.online_at);
                if (h.record.state == HostState::Online) next = std::min(next, h.next_boundary);
            }
        }
        if (next > target) break;
        clock_.set(next);

        std::vector<CloudHostId> started;
        std::vector<CloudHostId> due;
        BillingHandler handler;
        {
            std::lock_guard lock(mu_);
            for (auto& [id, h] : hosts_) {
                if (h.record.state == HostState::Starting && h.online_at <= next) {
                    h.record.state = HostState::Online;
                    started.push_back(id);
                }
            }
            for (auto& [id, h] : hosts_) {
                if (h.record.state == HostState::Online && h.next_boundary <= next) {
                    h.next_boundary += options_.billing_time_unit_ms;
                    due.push_back(id);
                }
            }
            handler = billing_;
        }
        for (auto const& id : started) emit(event_type::HostOnline, id, true);
        for (auto const& id : due) {
            {
                std::lock_guard lock(mu_);
                auto it = hosts_.find(id);
                if (it == hosts_.end() || it->second.record.state != HostState::Online) continue;
            }
            bus_.tick();
            bus_.flush();
            if (handler) handler(id);
        }
    }
    clock_.set(target);
    bus_.tick();
}

void SimulatedBackend::terminate(const CloudHostId& id) {
    std::unique_ptr<hostd::HostDaemon> daemon;
    {
        std::lock_guard lock(mu_);
        auto it = hosts_.find(id);
        if (it == hosts_.end() || it->second.record.state != HostState::Online) {
            throw Error(ErrorCode::UnknownHost, id.hex());
        }
        it->second.record.state = HostState::Terminating;
        daemon = std::move(it->second.daemon);
    }
    if (daemon) daemon->shutdown();
    emit(event_type::HostOffline, id, true);
    {
        std::lock_guard lock(mu_);
        hosts_.at(id).record.state = HostState::Gone;
    }
    emit(event_type::HostTerminated, id, false);
}

void SimulatedBackend::kill(const CloudHostId& id) {
    std::unique_ptr<hostd::HostDaemon> daemon;
    {
        std::lock_guard lock(mu_);
        auto it = hosts_.find(id);
        if (it == hosts_.end() || it->second.record.state == HostState::Gone) {
            throw Error(ErrorCode::UnknownHost, id.hex());
        }
        it->second.record.state = HostState::Gone;
        daemon = std::move(it->second.daemon);
    }
    if (daemon) daemon->shutdown();
}

std::vector<CloudHostRecord> SimulatedBackend::list() const {
    std::lock_guard lock(mu_);
    std::vector<CloudHostRecord> out;
    for (auto const& [id, h] : hosts_) {
        if (h.record.state != HostState::Gone) out.push_back(h.record);
    }
    return out;
}

std::optional<CloudHostRecord> SimulatedBackend::find(const CloudHostId& id) const {
    std::lock_guard lock(mu_);
    auto it = hosts_.find(id);
    if (it == hosts_.end()) return std::nullopt;
    return it->second.record;
}

void SimulatedBackend::set_billing_handler(BillingHandler handler) {
    std::lock_guard lock(mu_);
    billing_ = std::move(handler);
}

void SimulatedBackend::shutdown() {
    std::vector<CloudHostId> live;
    {
        std::lock_guard lock(mu_);
        billing_ = nullptr;
        for (auto const& [id, h] : hosts_) {
            if (h.record.state == HostState::Online) live.push_back(id);
        }
    }
    for (auto const& id : live) {
        try {
            terminate(id);
        } catch (const Error&) {
        }
    }
    std::lock_guard lock(mu_);
    for (auto& [id, h] : hosts_) {
        if (h.daemon) {
            h.daemon->shutdown();
            h.daemon.reset();
        }
        h.record.state = HostState::Gone;
    }
}

}// namespace elastikit::backend
