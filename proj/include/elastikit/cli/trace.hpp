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

#ifndef ELASTIKIT_CLI_TRACE_HPP
#define ELASTIKIT_CLI_TRACE_HPP

#include <elastikit/core/event.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace elastikit::cli {

struct TraceFilter {
    std::set<std::string> types;// empty keeps every type
    std::optional<std::string> host;// host_id property or host source
};

/// Matching events, stably sorted by timestamp.
std::vector<MonitoringEvent> filter_trace(const std::vector<MonitoringEvent>& events, const TraceFilter& filter);

/// "<ts> <type> <source> <props as sorted JSON>"
std::string format_event(const MonitoringEvent& e);

/// Empty if `types` occurs as a subsequence of the event types, otherwise
/// a description of the first type that could not be matched.
std::optional<std::string> check_order(const std::vector<MonitoringEvent>& events,
                                       const std::vector<std::string>& types);

/// Every HostTerminatedEvent lies a whole number of billing units after its
/// host's HostProvisionRequested. Returns the first violation.
std::optional<std::string> check_billing_alignment(const std::vector<MonitoringEvent>& events,
                                                   std::int64_t billing_unit_ms);

/// Replays deploys, migrations and destroys; no host is terminated while an
/// object resides on it and no object is deployed twice. Returns the first
/// violation.
std::optional<std::string> check_residency(const std::vector<MonitoringEvent>& events);

}// namespace elastikit::cli

#endif// ELASTIKIT_CLI_TRACE_HPP
