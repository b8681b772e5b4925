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

#include <elastikit/core/event.hpp>
#include <elastikit/core/types.hpp>

#include <array>

namespace elastikit {

std::string_view to_string(PassingMode mode) noexcept {
    return mode == PassingMode::ByValue ? "ByValue" : "ByReference";
}

std::string_view to_string(ObjectState state) noexcept {
    switch (state) {
        case ObjectState::Scheduling: return "Scheduling";
        case ObjectState::Deployed: return "Deployed";
        case ObjectState::Migrating: return "Migrating";
        case ObjectState::Destroyed: return "Destroyed";
    }
    return "?";
}

bool conforms_to(const Value& v, PassingMode mode) {
    if (mode == PassingMode::ByReference) {
        return v.kind() == Value::Kind::Ref;
    }
    return !v.contains_ref();
}

bool is_valid_event_type(std::string_view type) noexcept {
    static constexpr std::array kCatalog{
        event_type::HostOnline,      event_type::HostOffline,       event_type::HostProvisionRequested,
        event_type::HostTerminated,  event_type::ObjectScheduled,   event_type::ObjectDeployed,
        event_type::ObjectMigrated,  event_type::ObjectDestroyed,   event_type::ExecutionStarted,
        event_type::ExecutionFinished, event_type::ExecutionFailed, event_type::PolicyDecisionRejected,
        event_type::Drop,
    };
    for (auto t : kCatalog) {
        if (t == type) return true;
    }
    return type.size() > event_type::CustomPrefix.size() && type.starts_with(event_type::CustomPrefix);
}

std::string EventSource::to_string() const {
    switch (kind) {
        case Kind::Manager: return "manager";
        case Kind::External: return "external";
        case Kind::Host: return "host:" + to_hex(id);
        case Kind::Object: return "object:" + to_hex(id);
    }
    return "?";
}

std::optional<EventSource> EventSource::parse(std::string_view text) {
    if (text == "manager") return manager();
    if (text == "external") return external();
    auto with_id = [&](std::string_view prefix, Kind kind) -> std::optional<EventSource> {
        if (!text.starts_with(prefix)) return std::nullopt;
        auto parsed = parse_hex16(text.substr(prefix.size()));
        if (!parsed) return std::nullopt;
        return EventSource{kind, *parsed};
    };
    if (auto s = with_id("host:", Kind::Host)) return s;
    return with_id("object:", Kind::Object);
}

}// namespace elastikit
