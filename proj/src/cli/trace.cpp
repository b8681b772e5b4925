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

#include <elastikit/cli/trace.hpp>
#include <elastikit/events/event_log.hpp>

#include <algorithm>
#include <map>

namespace elastikit::cli {

namespace {

std::string text_prop(const MonitoringEvent& e, const std::string& name) {
    auto const* v = e.property(name);
    return v != nullptr && v->kind() == Value::Kind::Text ? v->as_text() : std::string();
}

}// namespace

std::vector<MonitoringEvent> filter_trace(const std::vector<MonitoringEvent>& events, const TraceFilter& filter) {
    std::vector<MonitoringEvent> out;
    for (auto const& e : events) {
        if (!filter.types.empty() && !filter.types.contains(e.type)) continue;
        if (filter.host && text_prop(e, "host_id") != *filter.host && e.source.to_string() != "host:" + *filter.host) {
            continue;
        }
        out.push_back(e);
    }
    std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) { return a.timestamp < b.timestamp; });
    return out;
}

std::string format_event(const MonitoringEvent& e) {
    auto line = events::to_json_line(e);
    auto props_at = line.find("\"props\":") + 8;
    auto props_end = line.find(",\"source\":");
    return std::to_string(e.timestamp) + ' ' + e.type + ' ' + e.source.to_string() + ' ' +
           line.substr(props_at, props_end - props_at);
}

std::optional<std::string> check_order(const std::vector<MonitoringEvent>& events,
                                       const std::vector<std::string>& types) {
    std::size_t next = 0;
    for (auto const& e : events) {
        if (next < types.size() && e.type == types[next]) ++next;
    }
    if (next == types.size()) return std::nullopt;
    if (next == 0) return "no " + types[0] + " in trace";
    return "no " + types[next] + " after " + types[next - 1];
}

std::optional<std::string> check_billing_alignment(const std::vector<MonitoringEvent>& events,
                                                   std::int64_t billing_unit_ms) {
    std::map<std::string, std::int64_t> provisioned;
    for (auto const& e : events) {
        auto host = text_prop(e, "host_id");
        if (e.type == event_type::HostProvisionRequested) {
            provisioned[host] = e.timestamp;
        } else if (e.type == event_type::HostTerminated) {
            auto it = provisioned.find(host);
            if (it == provisioned.end()) return "host " + host + " terminated without a provision request";
            auto age = e.timestamp - it->second;
            if (age <= 0 || age % billing_unit_ms != 0) {
                return "host " + host + " terminated " + std::to_string(age) + " ms after provisioning";
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_residency(const std::vector<MonitoringEvent>& events) {
    std::map<std::string, std::string> where;
    std::map<std::string, int> residents;
    for (auto const& e : events) {
        auto co = text_prop(e, "co_id");
        if (e.type == event_type::ObjectDeployed) {
            if (where.contains(co)) return "object " + co + " deployed twice";
            where[co] = text_prop(e, "host_id");
            ++residents[where[co]];
        } else if (e.type == event_type::ObjectMigrated) {
            auto src = text_prop(e, "source");
            if (where[co] != src) return "object " + co + " migrated from a host it was not on";
            --residents[src];
            where[co] = text_prop(e, "dest");
            ++residents[where[co]];
        } else if (e.type == event_type::ObjectDestroyed) {
            auto it = where.find(co);
            if (it == where.end()) return "object " + co + " destroyed while not deployed";
            --residents[it->second];
            where.erase(it);
        } else if (e.type == event_type::HostTerminated) {
            auto host = text_prop(e, "host_id");
            if (residents[host] > 0) return "host " + host + " terminated with residents";
        }
    }
    return std::nullopt;
}

}// namespace elastikit::cli
