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

#ifndef ELASTIKIT_BACKEND_BACKEND_HPP
#define ELASTIKIT_BACKEND_BACKEND_HPP

#include <elastikit/core/clock.hpp>
#include <elastikit/core/ids.hpp>
#include <elastikit/events/bus.hpp>
#include <elastikit/wire/socket.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elastikit::backend {

enum class HostState : std::uint8_t { Starting, Online, Terminating, Gone };

std::string_view to_string(HostState s) noexcept;

struct CloudHostRecord {
    CloudHostId id;
    wire::Endpoint endpoint;
    std::int64_t provisioned_at = 0;
    std::int64_t billing_time_unit_ms = 0;
    HostState state = HostState::Starting;
    std::string size;
};

inline constexpr std::int64_t kSimulatedBillingUnitMs = 60'000;
inline constexpr std::int64_t kLocalBillingUnitMs = 30'000;
inline constexpr std::int64_t kSimulatedStartupDelayMs = 2'000;

/// Called at every billing boundary of an Online host. Backends never hold
/// their own locks while calling it, so it may call terminate().
using BillingHandler = std::function<void(const CloudHostId&)>;

/// Provisioning over one kind of cloud.
///
/// Lifecycle events go to the bus: HostProvisionRequested, HostOnline,
/// HostOffline and HostTerminatedEvent, each with a host_id property.
class CloudBackend {
  public:
    virtual ~CloudBackend() = default;

    [[nodiscard]] virtual std::string name() const = 0;

    /// Returns once the host is Online. Throws QuotaExceeded, StartTimeout
    /// or SpawnFailure.
    virtual CloudHostRecord provision(const std::string& size) = 0;

    /// Shuts the host down and waits for it. Throws UnknownHost.
    virtual void terminate(const CloudHostId& id) = 0;

    /// Every host that is not Gone, sorted by id.
    [[nodiscard]] virtual std::vector<CloudHostRecord> list() const = 0;
    [[nodiscard]] virtual std::optional<CloudHostRecord> find(const CloudHostId& id) const = 0;

    [[nodiscard]] virtual std::int64_t billing_time_unit_ms() const = 0;
    virtual void set_billing_handler(BillingHandler handler) = 0;

    /// Terminates everything still running. Idempotent.
    virtual void shutdown() = 0;
};

}// namespace elastikit::backend

#endif// ELASTIKIT_BACKEND_BACKEND_HPP
