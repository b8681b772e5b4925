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

#ifndef ELASTIKIT_HOSTD_HOST_DAEMON_HPP
#define ELASTIKIT_HOSTD_HOST_DAEMON_HPP

#include <elastikit/artifacts/artifacts.hpp>
#include <elastikit/core/event.hpp>
#include <elastikit/hostd/class_registry.hpp>
#include <elastikit/wire/channel.hpp>
#include <elastikit/wire/gate.hpp>
#include <elastikit/wire/socket.hpp>

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <unordered_map>

namespace elastikit::hostd {

struct HostOptions {
    wire::Endpoint listen{"127.0.0.1", 0};
    /// The manager's callback endpoint: globals, artifacts, lifecycle events.
    std::optional<wire::Endpoint> callback;
    CloudHostId host_id;
    /// Send HostOnline/HostOffline over the callback link. Simulated hosts
    /// leave this to their backend, which owns virtual time.
    bool announce_lifecycle = true;
    /// work(ms) is accounted instead of spun, and durations are the
    /// accounted work only.
    bool simulated = false;
    std::size_t cache_budget = artifacts::kDefaultCacheBudget;
    /// Local observer of every event this host emits (tests, tooling).
    std::function<void(const MonitoringEvent&)> on_event;
};

/// The cloud-host server.
///
/// Every connection must open with a Hello carrying the protocol version and
/// the registry digest. Invocations, field accesses and destroys on one CO
/// run in order on that CO's lane; different COs run concurrently. Events
/// caused by a request travel on the request's connection ahead of the
/// response, so the manager sees them first.
class HostDaemon {
  public:
    HostDaemon(const ClassRegistry& registry, HostOptions options);
    ~HostDaemon();
    HostDaemon(const HostDaemon&) = delete;
    HostDaemon& operator=(const HostDaemon&) = delete;

    /// Binds, connects the callback link and announces HostOnline.
    /// Throws BindFailure, or ConnectionClosed/RegistryMismatch for the
    /// callback link.
    void start();

    /// Announces HostOffline, closes every connection and waits for lanes.
    void shutdown();

    /// Becomes true when the callback link is lost; the process wrapper
    /// exits on it.
    [[nodiscard]] bool orphaned() const { return orphaned_.load(); }

    [[nodiscard]] std::uint16_t port() const { return port_; }
    [[nodiscard]] wire::Endpoint endpoint() const { return {options_.listen.host, port_}; }
    [[nodiscard]] const CloudHostId& id() const { return options_.host_id; }
    [[nodiscard]] std::size_t resident_count() const;
    [[nodiscard]] artifacts::ArtifactCache& cache() { return *cache_; }

  private:
    struct Sandbox;
    class Context;
    class CallbackOrigin;

    void accept_loop();
    void on_frame(const std::shared_ptr<wire::Channel>& ch, wire::DecodedFrame frame);
    void handle(const std::shared_ptr<wire::Channel>& ch, std::uint64_t rid, wire::Message msg);
    void post(const std::shared_ptr<Sandbox>& sb, std::shared_ptr<wire::Channel> ch, std::uint64_t rid,
              std::function<wire::Message()> task);
    void drain(std::shared_ptr<Sandbox> sb);
    std::shared_ptr<Sandbox> find(const CloudObjectId& id) const;
    void emit_on(const std::shared_ptr<wire::Channel>& ch, MonitoringEvent e);
    void emit_lifecycle(std::string_view type);
    std::shared_ptr<wire::Channel> callback() const;

    const ClassRegistry& registry_;
    HostOptions options_;
    artifacts::Digest digest_;
    std::unique_ptr<CallbackOrigin> origin_;
    std::unique_ptr<artifacts::ArtifactCache> cache_;

    wire::Listener listener_;
    std::uint16_t port_ = 0;
    std::thread acceptor_;
    std::atomic<bool> running_{false};
    std::atomic<bool> orphaned_{false};

    mutable std::mutex mu_;
    std::unordered_map<CloudObjectId, std::shared_ptr<Sandbox>> sandboxes_;
    std::vector<std::weak_ptr<wire::Channel>> connections_;
    std::set<const wire::Channel*> greeted_;
    std::shared_ptr<wire::Channel> callback_;

    std::shared_ptr<wire::HandlerGate> gate_;

    std::mutex lanes_mu_;
    std::condition_variable lanes_cv_;
    std::size_t active_lanes_ = 0;
};

}// namespace elastikit::hostd

#endif// ELASTIKIT_HOSTD_HOST_DAEMON_HPP
