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

#ifndef ELASTIKIT_BACKEND_SIMULATED_HPP
#define ELASTIKIT_BACKEND_SIMULATED_HPP

#include <elastikit/backend/backend.hpp>
#include <elastikit/hostd/host_daemon.hpp>

#include <map>
#include <memory>
#include <mutex>

namespace elastikit::backend {

struct SimulatedOptions {
    std::size_t max_hosts = 8;
    std::int64_t billing_time_unit_ms = kSimulatedBillingUnitMs;
    std::int64_t startup_delay_ms = kSimulatedStartupDelayMs;
    /// Where the in-process hosts call back to; none for standalone use.
    std::optional<wire::Endpoint> callback;
};

/// Hosts are in-process daemons on loopback driven by a virtual clock.
///
/// Nothing happens until the clock moves: provision() advances it by the
/// startup delay, and advance_clock() fires due startups and billing
/// boundaries in time order, host-id order within one instant. The bus is
/// ticked and flushed before each billing callback so policies see metrics
/// that are current at the boundary.
class SimulatedBackend final : public CloudBackend {
  public:
    SimulatedBackend(VirtualClock& clock, events::EventBus& bus, const hostd::ClassRegistry& registry,
                     SimulatedOptions options);
    ~SimulatedBackend() override;

    [[nodiscard]] std::string name() const override { return "simulated"; }
    CloudHostRecord provision(const std::string& size) override;
    void terminate(const CloudHostId& id) override;
    [[nodiscard]] std::vector<CloudHostRecord> list() const override;
    [[nodiscard]] std::optional<CloudHostRecord> find(const CloudHostId& id) const override;
    [[nodiscard]] std::int64_t billing_time_unit_ms() const override { return options_.billing_time_unit_ms; }
    void set_billing_handler(BillingHandler handler) override;
    void shutdown() override;

    void advance_clock(std::int64_t dt_ms);
    /// Moves virtual time to an absolute instant (no-op if in the past).
    void advance_to(std::int64_t t_ms);

    /// Drops a host without a goodbye: its daemon stops, no events. Test hook.
    void kill(const CloudHostId& id);

  private:
    struct Host {
        CloudHostRecord record;
        std::int64_t online_at = 0;
        std::int64_t next_boundary = 0;
        std::unique_ptr<hostd::HostDaemon> daemon;
    };

    void emit(std::string_view type, const CloudHostId& id, bool from_host);

    VirtualClock& clock_;
    events::EventBus& bus_;
    const hostd::ClassRegistry& registry_;
    SimulatedOptions options_;
    IdGenerator ids_;

    mutable std::mutex mu_;
    std::map<CloudHostId, Host> hosts_;
    BillingHandler billing_;
    std::recursive_mutex advance_mu_;
};

}// namespace elastikit::backend

#endif// ELASTIKIT_BACKEND_SIMULATED_HPP
