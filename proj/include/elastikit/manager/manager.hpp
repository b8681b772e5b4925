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

#ifndef ELASTIKIT_MANAGER_MANAGER_HPP
#define ELASTIKIT_MANAGER_MANAGER_HPP

#include <elastikit/artifacts/artifacts.hpp>
#include <elastikit/backend/backend.hpp>
#include <elastikit/backend/local.hpp>
#include <elastikit/backend/simulated.hpp>
#include <elastikit/events/bus.hpp>
#include <elastikit/hostd/class_registry.hpp>
#include <elastikit/manager/callback_server.hpp>
#include <elastikit/manager/config.hpp>
#include <elastikit/policy/policy.hpp>
#include <elastikit/wire/gate.hpp>

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

namespace elastikit::manager {

/// busy time per utilization window, summed over every host
inline constexpr std::string_view kBusyMetric = "host.busy_ms";

class CloudManager;

/// Application-side stand-in for one cloud object. Every operation blocks
/// until the host answered. Copies refer to the same object.
class CloudObjectHandle {
  public:
    CloudObjectHandle(CloudManager& manager, CloudObjectId id, std::string class_name)
        : manager_(&manager), id_(id), class_name_(std::move(class_name)) {}

    [[nodiscard]] const CloudObjectId& id() const { return id_; }
    [[nodiscard]] const std::string& class_name() const { return class_name_; }
    /// The handle as a by-reference argument.
    [[nodiscard]] Value ref() const { return Value::ref(id_); }

    Value invoke(const std::string& method, List args = {}) const;
    [[nodiscard]] Value get(const std::string& field) const;
    void set(const std::string& field, Value value) const;
    void destroy() const;

  private:
    CloudManager* manager_;
    CloudObjectId id_;
    std::string class_name_;
};

/// The application's view of the cloud: schedules objects through the
/// scaling policy, enacts provisioning, migration and release, proxies
/// calls to hosts and owns globals, artifacts and the monitoring stream.
///
/// Scheduling (deploy, migrate, billing boundaries) is serialized. Calls on
/// existing objects run concurrently with each other and with scheduling,
/// except that calls on an object being migrated wait for the move.
class CloudManager {
  public:
    /// policy overrides the configured one when given.
    explicit CloudManager(ManagerConfig config, const hostd::ClassRegistry& registry,
                          std::shared_ptr<policy::ScalingPolicy> policy = nullptr);
    ~CloudManager();
    CloudManager(const CloudManager&) = delete;
    CloudManager& operator=(const CloudManager&) = delete;

    /// Throws UnknownClass, ArityMismatch, PolicyError, ProvisionFailed or
    /// DeployFailed.
    CloudObjectHandle deploy_object(const std::string& class_name, List ctor_args = {});

    /// Throws UnknownCO, ObjectDestroyed, HostUnreachable or the host's
    /// error (ApplicationError, UnknownMethod, ...).
    Value invoke(const CloudObjectId& id, const std::string& method, List args = {});
    Value get_field(const CloudObjectId& id, const std::string& field);
    void set_field(const CloudObjectId& id, const std::string& field, Value value);
    void destroy_object(const CloudObjectId& id);

    /// Throws NotQuiescent, SnapshotUnsupported, ObjectDestroyed or
    /// DestUnreachable; the object stays put on failure.
    void migrate(const CloudObjectId& id, const CloudHostId& dest);

    /// Consults the policy for one host at a billing boundary. Backends call
    /// this; it never throws.
    void billing_tick(const CloudHostId& host);

    [[nodiscard]] Value global_get(const std::string& name) const { return globals_.get(name); }
    void global_set(const std::string& name, Value value) { globals_.set(name, std::move(value)); }

    artifacts::Digest publish_artifact(std::string_view payload) { return artifacts_.publish(payload); }
    artifacts::Digest publish_artifact(std::span<const std::uint8_t> payload) { return artifacts_.publish(payload); }

    /// Throws UnknownCO for ids this manager never issued.
    [[nodiscard]] CloudObjectHandle handle(const CloudObjectId& id);
    [[nodiscard]] std::optional<CloudObjectDescriptor> describe(const CloudObjectId& id) const;
    [[nodiscard]] std::vector<CloudObjectDescriptor> objects() const;
    [[nodiscard]] policy::HostPoolView pool_view() const;

    /// Simulated backend only: moves virtual time, firing startups and
    /// billing boundaries. Throws InvalidConfig on other backends.
    void advance_clock(std::int64_t dt_ms);

    [[nodiscard]] const ManagerConfig& config() const { return config_; }
    [[nodiscard]] const Clock& clock() const { return *clock_; }
    [[nodiscard]] events::EventBus& bus() { return *bus_; }
    [[nodiscard]] events::MetricEngine& metrics() { return engine_; }
    [[nodiscard]] backend::CloudBackend& backend() { return *backend_; }
    [[nodiscard]] backend::SimulatedBackend* simulated_backend();
    [[nodiscard]] backend::LocalBackend* local_backend();
    [[nodiscard]] CallbackServer& callback_server() { return *callback_; }
    [[nodiscard]] const hostd::ClassRegistry& registry() const { return registry_; }

    /// Terminates every host and stops all threads. Idempotent.
    void shutdown();

  private:
    struct HostLink {
        CloudHostId id;
        wire::Endpoint endpoint;
        std::int64_t provisioned_at = 0;
        std::shared_ptr<wire::Channel> channel;
        std::atomic<std::size_t> residents{0};
        std::atomic<bool> lost{false};
        std::atomic<bool> closing{false};
    };
    struct ObjectEntry {
        std::shared_mutex op_mu;// shared per call, exclusive for migrate/destroy
        std::mutex desc_mu;
        CloudObjectDescriptor desc;
    };

    std::shared_ptr<ObjectEntry> entry(const CloudObjectId& id) const;
    std::shared_ptr<HostLink> link(const CloudHostId& id) const;
    std::shared_ptr<HostLink> connect_host(const backend::CloudHostRecord& record);
    std::shared_ptr<HostLink> provision_host();
    void release_host(const std::shared_ptr<HostLink>& l);
    void mark_lost(HostLink& l);
    policy::HostPoolView pool_view_locked() const;
    events::MonitoringRepository current_repository();
    Value call_object(const CloudObjectId& id, const wire::Message& request, const std::string& what);
    void migrate_locked(const CloudObjectId& id, const CloudHostId& dest);
    void emit(std::string_view type, Map props);

    ManagerConfig config_;
    const hostd::ClassRegistry& registry_;
    std::unique_ptr<Clock> clock_;
    VirtualClock* virtual_clock_ = nullptr;
    events::MetricEngine engine_;
    std::unique_ptr<events::EventBus> bus_;
    GlobalStore globals_;
    artifacts::ArtifactStore artifacts_;
    std::unique_ptr<CallbackServer> callback_;
    std::unique_ptr<backend::CloudBackend> backend_;
    std::unique_ptr<policy::PolicyRunner> runner_;
    IdGenerator ids_;

    std::recursive_mutex sched_mu_;
    mutable std::mutex links_mu_;
    std::map<CloudHostId, std::shared_ptr<HostLink>> links_;
    mutable std::mutex objects_mu_;
    std::map<CloudObjectId, std::shared_ptr<ObjectEntry>> objects_;
    std::atomic<std::size_t> online_hosts_{0};

    std::shared_ptr<wire::HandlerGate> gate_ = std::make_shared<wire::HandlerGate>();
    std::atomic<bool> running_{true};
    std::mutex ticker_mu_;
    std::condition_variable ticker_cv_;
    std::thread ticker_;
};

}// namespace elastikit::manager

#endif// ELASTIKIT_MANAGER_MANAGER_HPP
