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

#ifndef ELASTIKIT_CORE_EVENT_HPP
#define ELASTIKIT_CORE_EVENT_HPP

#include <elastikit/core/ids.hpp>
#include <elastikit/core/value.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace elastikit {

/// Predefined event types. Application-defined types must start with
/// "custom.".
namespace event_type {
inline constexpr std::string_view HostOnline = "HostOnline";
inline constexpr std::string_view HostOffline = "HostOffline";
inline constexpr std::string_view HostProvisionRequested = "HostProvisionRequested";
inline constexpr std::string_view HostTerminated = "HostTerminatedEvent";
inline constexpr std::string_view ObjectScheduled = "ObjectScheduledEvent";
inline constexpr std::string_view ObjectDeployed = "ObjectDeployedEvent";
inline constexpr std::string_view ObjectMigrated = "ObjectMigratedEvent";
inline constexpr std::string_view ObjectDestroyed = "ObjectDestroyedEvent";
inline constexpr std::string_view ExecutionStarted = "ExecutionStarted";
inline constexpr std::string_view ExecutionFinished = "ExecutionFinished";
inline constexpr std::string_view ExecutionFailed = "ExecutionFailedEvent";
inline constexpr std::string_view PolicyDecisionRejected = "PolicyDecisionRejected";
inline constexpr std::string_view Drop = "DropEvent";
inline constexpr std::string_view CustomPrefix = "custom.";
}// namespace event_type

/// True for catalog types and "custom.<name>" types.
[[nodiscard]] bool is_valid_event_type(std::string_view type) noexcept;

struct EventSource {
    enum class Kind : std::uint8_t { Manager = 0, Host = 1, Object = 2, External = 3 };

    Kind kind = Kind::Manager;
    // Host or object id bytes, nil for Manager/External.
    std::array<std::uint8_t, 16> id{};

    static EventSource manager() { return {}; }
    static EventSource external() { return {Kind::External, {}}; }
    static EventSource host(const CloudHostId& h) { return {Kind::Host, h.bytes()}; }
    static EventSource object(const CloudObjectId& o) { return {Kind::Object, o.bytes()}; }

    /// "manager", "external", "host:<hex>", "object:<hex>"
    [[nodiscard]] std::string to_string() const;
    static std::optional<EventSource> parse(std::string_view text);

    auto operator<=>(const EventSource&) const = default;
};

/// One record of the monitoring stream. The timestamp is assigned by the
/// manager-side event bus at intake; producers leave it at zero.
struct MonitoringEvent {
    std::string type;
    std::int64_t timestamp = 0;
    EventSource source;
    Map properties;

    [[nodiscard]] const Value* property(const std::string& name) const {
        auto it = properties.find(name);
        return it == properties.end() ? nullptr : &it->second;
    }

    friend bool operator==(const MonitoringEvent&, const MonitoringEvent&) = default;
};

}// namespace elastikit

#endif// ELASTIKIT_CORE_EVENT_HPP
